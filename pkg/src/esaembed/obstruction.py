"""Checks behind the bound on branching for factorizable embeddings.

An embedding ``f`` factors with constant ``C`` when
``||f(u) - f(v)||_1 <= d(u, v) < C ||f(u) - f(v)||_s`` for all pairs.  The
pipeline here checks that condition, checks the midpoint families it produces,
reduces such a family to normal form ``z_1..z_k``, and evaluates the witness
indices ``r(i, j)``, triple colours and growth chains that bound ``k``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, PreconditionError, ReductionError
from .graphs import MetricTable, VertexLabel, frac_str
from .signvec import SignVector, l1_norm, list_norm, summing_norm

RED = "red"
BLUE = "blue"
GREEN = "green"
COLORS = (RED, BLUE, GREEN)


def _frac(x) -> Fraction:
    return Fraction(x)


# Factorization condition.

@dataclass
class RationalEmbedding:
    """Vertex images with optional common scale factor."""

    images: dict
    C: Fraction | None = None
    scale: Fraction = Fraction(1)

    def image(self, v: VertexLabel) -> SignVector:
        return self.images[v]


@dataclass
class FactorizationReport:
    C: Fraction | None
    l1_ok: bool
    tightest_C: Fraction | None
    worst_pair: tuple
    l1_violation: tuple | None

    @property
    def passed(self) -> bool:
        """``C`` passes iff the l1 bound holds and ``C`` exceeds every ``d / ||.||_s``."""
        if not self.l1_ok or self.tightest_C is None or self.C is None:
            return False
        return self.C > self.tightest_C

    def to_json(self) -> dict:
        t = self.tightest_C
        return {
            "C": None if self.C is None else frac_str(self.C),
            "l1_ok": self.l1_ok,
            "smallest_passing_C": None if t is None else {"exact": frac_str(t), "approx": float(t),
                                                          "note": "passes for every C strictly above this"},
            "worst_pair": list(self.worst_pair),
            "l1_violation": self.l1_violation,
            "passed": self.passed,
        }


def _factor_scan(pairs, C):
    """``pairs`` yields ``(u, v, d, l1, s)`` with the norms already scaled."""
    tight = Fraction(0)
    worst = ()
    l1_bad = None
    degenerate = False
    for u, v, d, l1, s in pairs:
        if l1 > d and l1_bad is None:
            l1_bad = (str(u), str(v), frac_str(l1), frac_str(d))
        if s == 0:
            degenerate = True
            worst = (str(u), str(v))
            continue
        ratio = d / s
        if not degenerate and ratio >= tight:
            tight, worst = ratio, (str(u), str(v))
    return FactorizationReport(C, l1_bad is None, None if degenerate else tight, worst, l1_bad)


def check_factorization(f: RationalEmbedding, metric, C=None) -> FactorizationReport:
    """Exact check of ``||f(u)-f(v)||_1 <= d(u,v) < C ||f(u)-f(v)||_s`` over all pairs.

    ``metric`` is a :class:`MetricTable` or a dict ``{(u, v): d}``.
    ``tightest_C`` is ``max d / ||f(u)-f(v)||_s``; every ``C`` strictly above it
    passes the second inequality.  It is ``None`` when two images coincide.
    """
    C = _frac(C) if C is not None else (f.C if f.C is not None else None)
    if isinstance(metric, dict):
        triples = [(u, v, Fraction(d)) for (u, v), d in metric.items()]
    else:
        triples = list(metric.items())
        missing = [v for v in metric.graph.vertices if v not in f.images]
        if missing:
            raise DomainError(f"no image for {missing[0]}")
    scale = Fraction(f.scale)

    def pairs():
        for u, v, d in triples:
            diff = f.images[u] - f.images[v]
            yield u, v, d, l1_norm(diff) * scale, summing_norm(diff) * scale

    return _factor_scan(pairs(), C)


def factorization_from_table(table, C=None, norms=None) -> FactorizationReport:
    """Factorization check for an embedding table scaled by ``1 / ||x_1||_1``."""
    from .distortion import image_norms, norm_matrices

    g = table.graph
    norms = norms if norms is not None else norm_matrices(table)
    top_l1 = int(image_norms(table)["l1"][g.index(g.top)])
    units = g.metric.units
    per_unit = g.base**g.n
    V = len(g.vertices)

    def pairs():
        for i in range(V):
            for j in range(i + 1, V):
                yield (g.vertices[i], g.vertices[j], Fraction(int(units[i, j]), per_unit),
                       Fraction(int(norms["l1"][i, j]), top_l1), Fraction(int(norms["summing"][i, j]), top_l1))

    return _factor_scan(pairs(), None if C is None else _frac(C))


# Midpoint families.

@dataclass
class MidpointReport:
    eta: Fraction
    C: Fraction
    midpoint: bool
    midpoint2: bool
    far: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.midpoint and self.midpoint2 and self.far

    def to_json(self) -> dict:
        return {
            "eta": frac_str(self.eta),
            "C": frac_str(self.C),
            "midpoint": self.midpoint,
            "midpoint2": self.midpoint2,
            "far": self.far,
            "witnesses": self.witnesses,
            "passed": self.passed,
        }


def check_midpoint_family(xs, eta, C) -> MidpointReport:
    """Check the two-sided midpoint bounds and the far condition on ``x_0..x_k``.

    ``xs[0]`` is ``x_0``.  For ``i != j >= 1``:
    ``(1-eta)/2 ||x_0||_1 <= ||x_i||_1, ||x_0 - x_i||_1 <= (1+eta)/2 ||x_0||_1`` and
    ``||x_i - x_j||_s > ||x_i - x_j||_1 / C >= ||x_0||_1 / C**2``.
    """
    eta, C = _frac(eta), _frac(C)
    if len(xs) < 3:
        raise DomainError("need x_0 and at least two further vectors (k >= 2)")
    if not 0 < eta < 1:
        raise PreconditionError(f"eta must lie in (0, 1), got {eta}")
    if C <= 1:
        raise PreconditionError(f"C must exceed 1, got {C}")
    x0 = xs[0]
    n0 = l1_norm(x0)
    if n0 == 0:
        raise PreconditionError("x_0 must be nonzero")
    lo, hi = (1 - eta) / 2 * n0, (1 + eta) / 2 * n0
    wit = {}
    mid = mid2 = far = True
    for i, x in enumerate(xs[1:], start=1):
        a = l1_norm(x)
        if not lo <= a <= hi:
            mid = False
            wit.setdefault("midpoint", [i, frac_str(a), frac_str(lo), frac_str(hi)])
        b = l1_norm(x0 - x)
        if not lo <= b <= hi:
            mid2 = False
            wit.setdefault("midpoint2", [i, frac_str(b), frac_str(lo), frac_str(hi)])
    for i, j in itertools.combinations(range(1, len(xs)), 2):
        diff = xs[i] - xs[j]
        s, l = summing_norm(diff), l1_norm(diff)
        if not (s * C > l and l * C >= n0):
            far = False
            wit.setdefault("far", [i, j, frac_str(s), frac_str(l), frac_str(n0)])
    return MidpointReport(eta, C, mid, mid2, far, wit)


# Normal-form reduction.

def stretch_points(a: list) -> list:
    """``b_0 = 0``, ``b_m = b_{m-1} + max(|a_m|, 1)``."""
    b = [0]
    for x in a:
        b.append(b[-1] + max(abs(x), 1))
    return b


def apply_stretch(b: list, y: list) -> list:
    """The coordinate-stretching operator: coordinate ``m <= p`` is spread evenly
    over ``b_{m-1}+1..b_m``; coordinate ``m > p`` moves to ``b_p + m - p``."""
    p = len(b) - 1
    out = []
    for m in range(1, max(len(y), p) + 1):
        val = Fraction(y[m - 1]) if m <= len(y) else Fraction(0)
        if m <= p:
            w = b[m] - b[m - 1]
            out.extend([val / w] * w)
        else:
            out.append(val)
    return out


@dataclass
class ZFamily:
    """Normal-form vectors ``z_1..z_k`` on ``{1..N}`` and the constant ``alpha``."""

    N: int
    vectors: tuple
    alpha: Fraction
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        self.alpha = Fraction(self.alpha)
        self.vectors = tuple(tuple(Fraction(x) for x in z) for z in self.vectors)
        if any(len(z) != self.N for z in self.vectors):
            raise DomainError("every z_i must have exactly N coordinates")
        den = 1
        for z in self.vectors:
            for x in z:
                den = den * x.denominator // math.gcd(den, x.denominator)
        self._den = den
        self._ints = tuple(tuple(int(x * den) for x in z) for z in self.vectors)

    @classmethod
    def from_scaled(cls, N: int, ints, den: int, alpha) -> "ZFamily":
        """Build from integer numerators over the common denominator ``den``."""
        fam = object.__new__(cls)
        fam.N, fam.alpha, fam.notes = N, Fraction(alpha), {}
        fam._den = den
        fam._ints = tuple(tuple(int(x) for x in z) for z in ints)
        if any(len(z) != N for z in fam._ints):
            raise DomainError("every z_i must have exactly N coordinates")
        fam.vectors = tuple(tuple(Fraction(x, den) for x in z) for z in fam._ints)
        return fam

    @property
    def k(self) -> int:
        return len(self.vectors)

    def violations(self) -> list:
        """Tags of the failed normal-form conditions."""
        bad = []
        if any(abs(a - b) > self._den for zi, zj in itertools.combinations(self._ints, 2) for a, b in zip(zi, zj)):
            bad.append("zdiff")
        aN = self.alpha * self.N
        for i, j in itertools.combinations(range(self.k), 2):
            if Fraction(list_norm([a - b for a, b in zip(self._ints[i], self._ints[j])], "summing"), self._den) < aN:
                bad.append("lfarz")
                break
        if aN < 2:
            bad.append("alphaN")
        if not 0 < self.alpha < 1:
            bad.append("alpha")
        return bad

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "alpha": frac_str(self.alpha),
            "z": [[str(x) for x in z] for z in self.vectors],
        }

    @classmethod
    def from_json(cls, obj) -> "ZFamily":
        return cls(int(obj["N"]), tuple(tuple(Fraction(x) for x in z) for z in obj["z"]), Fraction(obj["alpha"]))


def reduce_family(xs, C) -> ZFamily:
    """Reduce a midpoint family ``x_0..x_k`` to normal form with ``alpha = 1/(2C^2)``.

    ``x_0`` must have integer coefficients and ``||x_0||_1 >= 4C^2``.  The result
    satisfies the support, coordinate-difference, separation and ``alpha N >= 2``
    conditions, or :class:`ReductionError` names the one that failed.
    """
    C = _frac(C)
    if C <= 1:
        raise PreconditionError(f"C must exceed 1, got {C}")
    if len(xs) < 2:
        raise DomainError("need x_0 and at least one x_i")
    x0 = xs[0]
    if any(Fraction(v).denominator != 1 for _, _, v in x0.runs):
        raise PreconditionError("x_0 must have integer coefficients (pre-scale rational inputs)")
    if l1_norm(x0) < 4 * C * C:
        raise PreconditionError(f"||x_0||_1 = {l1_norm(x0)} is below 4C^2 = {4 * C * C}")

    a = [int(v) for v in x0.to_dense()]
    b = stretch_points(a)
    stretched = []
    for x in xs:
        dense = x.to_dense(max(x.support_end, len(a)))
        tx = SignVector.from_dense(apply_stretch(b, dense))
        if l1_norm(tx) != l1_norm(x) or summing_norm(tx) != summing_norm(x):
            raise AssertionError("stretching must preserve both norms")
        stretched.append(tx)

    t0 = stretched[0]
    length = max(v.support_end for v in stretched)
    d0 = t0.to_dense(length)
    support = [m for m in range(length) if d0[m] != 0]
    N = len(support)
    assert all(abs(d0[m]) == 1 for m in support)

    eta = 1 / (4 * C * C)
    zs = []
    approx = []
    for tx in stretched[1:]:
        dx = tx.to_dense(length)
        z = [Fraction(0)] * length
        for m in support:
            same = (dx[m] > 0) == (d0[m] > 0) and dx[m] != 0
            if same and abs(dx[m]) <= 1:
                z[m] = Fraction(dx[m])
            elif same:
                z[m] = Fraction(d0[m])
        approx.append(sum(abs(Fraction(p) - q) for p, q in zip(dx, z)) <= eta * N)
        zs.append(tuple(z[m] for m in support))

    alpha = 1 / (2 * C * C)
    fam = ZFamily(N, tuple(zs), alpha, notes={"approxzx": all(approx), "eta": frac_str(eta)})
    if any(abs(x) > 1 for z in zs for x in z):
        raise ReductionError("suppz", "normal-form coefficients exceed 1 in absolute value")
    for tag in fam.violations():
        raise ReductionError(tag, f"reduced family violates {tag} (N={N}, alpha={alpha})")
    return fam


# Witness indices, colours and chains.

def r_index(z: ZFamily, i: int, j: int) -> int:
    """Smallest ``r`` with ``alpha N <= |sum_{m<=r} (z_im - z_jm)| < alpha N + 1`` (1-based ``i, j``)."""
    if i == j:
        raise DomainError("r(i, j) needs i != j")
    if not (1 <= i <= z.k and 1 <= j <= z.k):
        raise DomainError(f"indices must lie in 1..{z.k}")
    zi, zj = z._ints[i - 1], z._ints[j - 1]
    # compare |S| / den against alpha*N and alpha*N + 1 in integers
    p, q = z.alpha.numerator * z.N, z.alpha.denominator
    lo, hi = p * z._den, (p + q) * z._den
    total = 0
    for r, (a, b) in enumerate(zip(zi, zj), start=1):
        total += a - b
        s = abs(total) * q
        if lo <= s < hi:
            return r
    raise DomainError(f"no witness index for ({i}, {j}); the family is not in normal form")


@dataclass
class RTable:
    """Witness indices ``r[(i, j)]`` for ``i < j`` together with ``alpha`` and ``N``."""

    r: dict
    alpha: Fraction
    N: int

    def __call__(self, i: int, j: int) -> int:
        return self.r[(min(i, j), max(i, j))]

    @property
    def gap(self) -> Fraction:
        return (Fraction(self.alpha) * self.N - 1) / 2

    @classmethod
    def from_family(cls, z: ZFamily) -> "RTable":
        r = {(i, j): r_index(z, i, j) for i, j in itertools.combinations(range(1, z.k + 1), 2)}
        return cls(r, z.alpha, z.N)


def color_from_r(rij: int, ril: int, rjl: int) -> str:
    M = max(rij, ril, rjl)
    if M == rjl:
        return RED
    if M == rij and rij > rjl:
        return BLUE
    assert M == ril and ril > max(rij, rjl)
    return GREEN


def _rtable(z) -> RTable:
    return z if isinstance(z, RTable) else RTable.from_family(z)


def color_triple(z, i: int, j: int, l: int) -> str:
    if not i < j < l:
        raise DomainError("color_triple needs i < j < l")
    t = _rtable(z)
    return color_from_r(t(i, j), t(i, l), t(j, l))


def verify_triple_separation(z, i: int, j: int, l: int):
    """``max - min`` of the three witness indices is at least ``(alpha N - 1)/2``."""
    if len({i, j, l}) != 3:
        raise DomainError("indices must be pairwise distinct")
    t = _rtable(z)
    rs = (t(i, j), t(i, l), t(j, l))
    gap = max(rs) - min(rs)
    return gap >= t.gap, gap


@dataclass
class ChainReport:
    color: str
    size: int
    passed: bool
    bound: int
    witness: tuple | None


def monochromatic_chain_check(z, B, color: str) -> ChainReport:
    """Verify the growth chain of witness indices on a monochromatic set ``B``.

    Red: listing ``B`` increasingly, ``r(b_q, b_t) >= (q+1)(alpha N - 1)/2`` for
    ``q < t``, hence ``|B| <= floor(4/alpha)``.  Blue: the same with ``B``
    listed decreasingly.  Green: ``r(b_t, b_u) >= (q+2)(alpha N - 1)/2`` whenever
    ``log2(u - t) >= q``, hence ``|B| <= 2**ceil(4/alpha)``.
    """
    if color not in COLORS:
        raise DomainError(f"unknown colour {color!r}")
    t = _rtable(z)
    Bs = sorted(set(B))
    for a, b, c in itertools.combinations(Bs, 3):
        got = color_from_r(t(a, b), t(a, c), t(b, c))
        if got != color:
            raise PreconditionError(f"triple ({a}, {b}, {c}) is {got}, not {color}")
    s = len(Bs)
    alpha = Fraction(t.alpha)
    step = t.gap
    if color in (RED, BLUE):
        seq = Bs if color == RED else Bs[::-1]
        bound = math.floor(4 / alpha)
        for q in range(1, s):
            for tt in range(q + 1, s + 1):
                if t(seq[q - 1], seq[tt - 1]) < (q + 1) * step:
                    return ChainReport(color, s, False, bound, (seq[q - 1], seq[tt - 1]))
    else:
        bound = 2 ** math.ceil(4 / alpha)
        qmax = int(math.floor(math.log2(s))) - 1 if s >= 2 else -1
        for q in range(0, qmax + 1):
            for tt in range(1, s + 1):
                for u in range(tt + 1, s + 1):
                    if u - tt >= 2**q and t(Bs[tt - 1], Bs[u - 1]) < (q + 2) * step:
                        return ChainReport(color, s, False, bound, (Bs[tt - 1], Bs[u - 1]))
    return ChainReport(color, s, s <= bound, bound, None if s <= bound else ("size", s))


# Random normal-form families.

def random_zfamily(rng: random.Random, max_N: int = 64, max_k: int = 5, min_k: int = 3,
                   halves: bool = True, attempts: int = 100) -> ZFamily:
    """A random family satisfying the normal-form conditions.

    Each coordinate ``m`` gets a sign ``s_m`` and every ``z_im`` is ``0`` or
    ``s_m`` (occasionally ``s_m / 2``), so coordinate differences are at most 1.
    ``alpha`` is then drawn so that every pair is ``alpha N``-separated.
    """
    for _ in range(attempts):
        N = rng.randint(4, max_N)
        k = rng.randint(min_k, max_k)
        signs = [rng.choice((-1, 1)) for _ in range(N)]
        vecs = []
        for _ in range(k):
            # numerators over 2
            vals = []
            for m in range(N):
                u = rng.random()
                if halves and u < 0.1:
                    vals.append(signs[m])
                elif u < 0.55:
                    vals.append(2 * signs[m])
                else:
                    vals.append(0)
            vecs.append(vals)
        dmin = min(
            max(abs(p) for p in itertools.accumulate(a - b for a, b in zip(vecs[i], vecs[j])))
            for i, j in itertools.combinations(range(k), 2)
        )
        top = min(dmin // 2, N - 1)
        if top < 2:
            continue
        alpha = Fraction(rng.randint(2, top), N)
        return ZFamily.from_scaled(N, vecs, 2, alpha)
    raise DomainError("could not draw a valid family; relax the size limits")


# Ramsey bounds.

RAMSEY_CAP_BITS = 10**6


def ramsey2_upper(m: int, c: int):
    """Upper bound on the ``c``-colour graph Ramsey number for cliques of size ``m``.

    End-homogeneous sequences: ``(c**L - 1)/(c - 1)`` vertices with ``L = c(m-2)+2``.
    Returns ``None`` when the bound has more than ``RAMSEY_CAP_BITS`` bits.
    """
    if m <= 2:
        return m
    L = c * (m - 2) + 2
    if L * math.log2(c) > RAMSEY_CAP_BITS:
        return None
    return (c**L - 1) // (c - 1)


def ramsey3_upper(s: int, c: int):
    """Upper bound on the ``c``-colour Ramsey number for triples and sets of size ``s``.

    Erdos-Rado stepping down: an end-homogeneous sequence of length
    ``L = R_2(s-1; c) + 1`` exists among ``f(1)`` points where ``f(L) = 1`` and
    ``f(i) = c**(i-1) f(i+1) + 1``.  ``None`` when the bound is too large to hold.
    """
    if s <= 3:
        return s
    r2 = ramsey2_upper(s - 1, c)
    if r2 is None:
        return None
    L = r2 + 1
    # log2 f(1) is about log2(c) * L**2 / 2
    if L.bit_length() > 64 or math.log2(c) * L * (L - 1) / 2 > RAMSEY_CAP_BITS:
        return None
    f = 1
    for i in range(L - 1, 0, -1):
        f = c ** (i - 1) * f + 1
    return f


@dataclass
class RamseyBound:
    C: Fraction | None
    C_squared: Fraction
    exponent: int
    s: int
    formula: str
    formula_pow: str
    upper_bound: object
    label: str = "upper bound, not exact"

    def to_json(self) -> dict:
        return {
            "C": None if self.C is None else frac_str(self.C),
            "C_squared": frac_str(self.C_squared),
            "s": str(self.s) if self.exponent <= 64 else f"2^{self.exponent}",
            "formula": self.formula_pow,
            "upper_bound": self.upper_bound if isinstance(self.upper_bound, str) else str(self.upper_bound),
            "label": self.label,
        }


def ramsey_bound(C=None, C_squared=None) -> RamseyBound:
    """``k(C) = R_3(s, 3)`` with ``s = 2**ceil(8 C^2)`` and an explicit upper bound.

    Irrational ``C`` such as ``sqrt(2)`` can be given exactly through ``C_squared``.
    """
    if (C is None) == (C_squared is None):
        raise DomainError("give exactly one of C and C_squared")
    c2 = _frac(C) ** 2 if C_squared is None else _frac(C_squared)
    if c2 <= 1:
        raise DomainError(f"C must exceed 1, got C^2 = {c2}")
    C = _frac(C) if C is not None else None
    e = math.ceil(8 * c2)
    s = 2**e
    formula = f"R_3({s},3)" if e <= 64 else f"R_3(2^{e},3)"
    ub = ramsey3_upper(s, 3) if e <= 64 else None
    return RamseyBound(C, c2, e, s, formula, f"R_3(2^{e}, 3)", "overflow" if ub is None else ub)
