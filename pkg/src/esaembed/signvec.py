"""Finitely supported sequences stored as runs, and the l1 / summing norms.

Coordinates are 1-based.  A :class:`SignVector` is a sorted tuple of maximal
runs ``(start, length, value)``; values are ints or :class:`~fractions.Fraction`.
The module also carries executable versions of the equal-signs-additive (ESA),
subadditive (SA) and spreading-invariance (IS) properties, checked on samples.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate

import numpy as np

from .errors import DomainError, PreconditionError

L1 = "l1"
SUMMING = "summing"
NORMS = (L1, SUMMING)

ESA = "ESA"
SA = "SA"
IS = "IS"
AXIOMS = (ESA, SA, IS)


def _num(x):
    """Normalize a scalar to int when integral, else Fraction."""
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _merge_runs(runs):
    out = []
    for start, length, val in runs:
        if val == 0 or length <= 0:
            continue
        if out and out[-1][2] == val and out[-1][0] + out[-1][1] == start:
            s, l, v = out[-1]
            out[-1] = (s, l + length, v)
        else:
            out.append((start, length, val))
    return tuple(out)


@dataclass(frozen=True)
class SignVector:
    """Immutable finitely supported sequence in run-length form."""

    runs: tuple = field(default=())

    def __post_init__(self):
        runs = tuple((int(s), int(l), _num(v)) for s, l, v in self.runs)
        prev_end = 0
        for s, l, _ in runs:
            if s < 1 or l < 1 or s <= prev_end:
                raise DomainError(f"runs must be positive, sorted and disjoint: {runs}")
            prev_end = s + l - 1
        object.__setattr__(self, "runs", _merge_runs(runs))

    @classmethod
    def zero(cls) -> "SignVector":
        return cls(())

    @classmethod
    def from_dense(cls, values, start: int = 1) -> "SignVector":
        """Build from a dense sequence whose first entry sits at ``start``."""
        if isinstance(values, np.ndarray) and values.dtype.kind in "iu":
            arr = values.astype(np.int64, copy=False)
            if arr.size == 0:
                return cls(())
            cuts = np.flatnonzero(np.diff(arr)) + 1
            starts = np.concatenate(([0], cuts))
            ends = np.concatenate((cuts, [arr.size]))
            vals = arr[starts]
            keep = vals != 0
            return cls(tuple(
                (int(s) + start, int(e - s), int(v))
                for s, e, v in zip(starts[keep], ends[keep], vals[keep])
            ))
        runs = []
        for offset, val in enumerate(values):
            val = _num(val)
            if val == 0:
                continue
            pos = start + offset
            if runs and runs[-1][2] == val and runs[-1][0] + runs[-1][1] == pos:
                runs[-1][1] += 1
            else:
                runs.append([pos, 1, val])
        return cls(tuple(tuple(r) for r in runs))

    @property
    def support_end(self) -> int:
        """Largest index in the support, 0 for the zero vector."""
        if not self.runs:
            return 0
        s, l, _ = self.runs[-1]
        return s + l - 1

    def to_dense(self, length: int | None = None) -> list:
        length = self.support_end if length is None else length
        if length < self.support_end:
            raise DomainError(f"length {length} cuts the support ending at {self.support_end}")
        out = [0] * length
        for s, l, v in self.runs:
            out[s - 1 : s - 1 + l] = [v] * l
        return out

    def to_numpy(self, length: int | None = None, dtype=np.int8) -> np.ndarray:
        length = self.support_end if length is None else length
        out = np.zeros(length, dtype=dtype)
        for s, l, v in self.runs:
            out[s - 1 : s - 1 + l] = v
        return out

    def is_zero(self) -> bool:
        return not self.runs

    def __neg__(self) -> "SignVector":
        return SignVector(tuple((s, l, -v) for s, l, v in self.runs))

    def scale(self, c) -> "SignVector":
        c = _num(c)
        return SignVector(tuple((s, l, _num(v * c)) for s, l, v in self.runs))

    def __add__(self, other: "SignVector") -> "SignVector":
        return _combine(self, other, 1)

    def __sub__(self, other: "SignVector") -> "SignVector":
        return _combine(self, other, -1)

    def coefficient(self, i: int):
        for s, l, v in self.runs:
            if s <= i < s + l:
                return v
        return 0

    def to_json(self) -> list:
        return [{"start": s, "len": l, "val": str(v)} for s, l, v in self.runs]

    @classmethod
    def from_json(cls, runs) -> "SignVector":
        if isinstance(runs, str):
            runs = json.loads(runs)
        return cls(tuple((r["start"], r["len"], Fraction(r["val"])) for r in runs))

    def to_tsv(self, length: int | None = None) -> str:
        """Dense tab-separated rendering; meant for small vectors."""
        return "\t".join(str(v) for v in self.to_dense(length)) + "\n"


def _combine(a: SignVector, b: SignVector, sign: int) -> SignVector:
    """Linear merge of the two run lists at every run boundary."""
    cuts = sorted({p for s, l, _ in a.runs + b.runs for p in (s, s + l)})
    runs = []
    ia = ib = 0
    ra, rb = a.runs, b.runs
    for lo, hi in zip(cuts, cuts[1:]):
        while ia < len(ra) and ra[ia][0] + ra[ia][1] <= lo:
            ia += 1
        while ib < len(rb) and rb[ib][0] + rb[ib][1] <= lo:
            ib += 1
        va = ra[ia][2] if ia < len(ra) and ra[ia][0] <= lo else 0
        vb = rb[ib][2] if ib < len(rb) and rb[ib][0] <= lo else 0
        val = va + sign * vb
        if val != 0:
            runs.append((lo, hi - lo, val))
    return SignVector(tuple(runs))


def l1_norm(v: SignVector):
    return sum((abs(val) * l for _, l, val in v.runs), 0)


def summing_norm(v: SignVector):
    """``max_k |a_1 + ... + a_k|``; prefix sums are monotone inside a run."""
    total = 0
    best = 0
    for _, l, val in v.runs:
        total += l * val
        best = max(best, abs(total))
    return best


def norm(v: SignVector, kind: str):
    if kind == L1:
        return l1_norm(v)
    if kind == SUMMING:
        return summing_norm(v)
    raise DomainError(f"unknown norm {kind!r}")


def shift(v: SignVector, t: int) -> SignVector:
    """Apply ``S**t``, moving coordinate ``i`` to ``i + t``."""
    if t < 0:
        raise DomainError("shift amount must be nonnegative")
    return SignVector(tuple((s + t, l, val) for s, l, val in v.runs))


# Dense list versions used by the axiom checks.

def list_norm(a, kind: str):
    if kind == L1:
        return sum(abs(x) for x in a)
    if kind == SUMMING:
        return max((abs(p) for p in accumulate(a)), default=0)
    raise DomainError(f"unknown norm {kind!r}")


def merge_at(a, k: int) -> list:
    """Replace ``a_k, a_{k+1}`` (1-based) by their sum."""
    if not 1 <= k < len(a):
        raise DomainError(f"merge position {k} outside [1, {len(a) - 1}]")
    return list(a[: k - 1]) + [a[k - 1] + a[k]] + list(a[k + 1 :])


def spread(a, indices) -> list:
    """Place ``a_i`` at coordinate ``indices[i]`` (1-based, strictly increasing)."""
    if len(indices) != len(a):
        raise DomainError("spreading needs one index per coefficient")
    if any(i < 1 for i in indices) or any(x >= y for x, y in zip(indices, indices[1:])):
        raise DomainError("spreading indices must be positive and strictly increasing")
    out = [0] * (indices[-1] if indices else 0)
    for i, x in zip(indices, a):
        out[i - 1] = x
    return out


@dataclass(frozen=True)
class AxiomResult:
    norm: str
    axiom: str
    original: object
    transformed: object
    passed: bool
    witness: tuple = ()


def check_axiom(norm_kind: str, axiom: str, a, params) -> AxiomResult:
    """Evaluate one instance of ESA, SA or IS exactly.

    ``params`` is the 1-based merge position for ESA/SA and the index sequence
    for IS.  ``original`` is the norm of ``a``; ``transformed`` the norm after
    merging or spreading.
    """
    a = [_num(x) for x in a]
    before = list_norm(a, norm_kind)
    if axiom in (ESA, SA):
        k = params
        if not 1 <= k < len(a):
            raise DomainError(f"merge position {k} outside [1, {len(a) - 1}]")
        if axiom == ESA and a[k - 1] * a[k] < 0:
            raise PreconditionError(f"ESA merge at {k} needs equal signs, got {a[k - 1]}, {a[k]}")
        b = merge_at(a, k)
        after = list_norm(b, norm_kind)
        ok = after == before if axiom == ESA else after <= before
    elif axiom == IS:
        b = spread(a, list(params))
        after = list_norm(b, norm_kind)
        ok = after == before
    else:
        raise DomainError(f"unknown axiom {axiom!r}")
    witness = () if ok else (tuple(a), params, tuple(b))
    return AxiomResult(norm_kind, axiom, before, after, ok, witness)


@dataclass
class AxiomSuiteReport:
    seed: int
    vectors: int
    checks: dict
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "vectors": self.vectors,
            "checks": self.checks,
            "failures": [list(map(str, f)) for f in self.failures[:20]],
            "passed": self.passed,
        }


def random_coefficients(rng: random.Random, max_support: int = 32, bound: int = 3) -> list:
    length = rng.randint(1, max_support)
    return [rng.randint(-bound, bound) for _ in range(length)]


def random_spreading(rng: random.Random, length: int, room: int = 4) -> list:
    return sorted(rng.sample(range(1, room * length + 1), length))


def axiom_suite(seed: int = 0, count: int = 1000, spreadings: int = 100,
                max_support: int = 32, bound: int = 3, norms=NORMS) -> AxiomSuiteReport:
    """Seeded sampling certificate for ESA, SA and IS on the given norms.

    ESA is tried at every merge position with equal (or zero) signs, SA at every
    position, IS on ``spreadings`` random index sequences per vector.
    """
    rng = random.Random(seed)
    checks = {f"{nk}:{ax}": 0 for nk in norms for ax in AXIOMS}
    failures = []
    # Inlined version of check_axiom: the inputs are plain int lists, so the
    # scalar normalization and result objects are skipped for speed.
    for _ in range(count):
        a = random_coefficients(rng, max_support, bound)
        spreads = [random_spreading(rng, len(a)) for _ in range(spreadings)]
        for nk in norms:
            before = list_norm(a, nk)
            for k in range(1, len(a)):
                after = list_norm(merge_at(a, k), nk)
                if a[k - 1] * a[k] >= 0:
                    checks[f"{nk}:{ESA}"] += 1
                    if after != before:
                        failures.append((nk, ESA, (tuple(a), k)))
                checks[f"{nk}:{SA}"] += 1
                if after > before:
                    failures.append((nk, SA, (tuple(a), k)))
            for idx in spreads:
                checks[f"{nk}:{IS}"] += 1
                if list_norm(spread(a, idx), nk) != before:
                    failures.append((nk, IS, (tuple(a), tuple(idx))))
    return AxiomSuiteReport(seed, count, checks, failures)
