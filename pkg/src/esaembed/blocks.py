"""Block layout, the dyadic intervals I_eps, the h vectors and Rademacher signs.

An embedded vector is a concatenation of ``2**M`` blocks of length
``2**(m+1)``; inside a block the positive part lives on ``[1, 2**m]`` and the
negative part is its mirror image under ``Ref(j) = 2**(m+1) - j + 1``.
``m`` is ``n`` for diamonds and ``2n`` for Laakso graphs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, ResourceError
from .graphs import DIAMOND, LAAKSO
from .signvec import SignVector

DEFAULT_MAX_BLOCKS = 2**20


def label_count(n: int, k: int) -> int:
    """``M = k + k**2 + ... + k**n``."""
    return sum(k**i for i in range(1, n + 1))


def label_order(n: int, k: int) -> dict:
    """Canonical position ``a(A)`` in ``1..M``: by length, then lexicographic."""
    order = {}
    pos = 1
    for length in range(1, n + 1):
        for lab in itertools.product(range(1, k + 1), repeat=length):
            order[lab] = pos
            pos += 1
    return order


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise DomainError(f"bad interval [{self.lo}, {self.hi}]")

    @property
    def card(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, j) -> bool:
        return self.lo <= j <= self.hi


@dataclass(frozen=True)
class BlockLayout:
    family: str
    n: int
    k: int

    @property
    def m(self) -> int:
        """Number of halvings available inside a block."""
        return self.n if self.family == DIAMOND else 2 * self.n

    @property
    def half(self) -> int:
        return 2**self.m

    @property
    def block_length(self) -> int:
        return 2 ** (self.m + 1)

    @property
    def M(self) -> int:
        return label_count(self.n, self.k)

    @property
    def block_count(self) -> int:
        return 2**self.M

    @property
    def length(self) -> int:
        return self.block_count * self.block_length

    @cached_property
    def order(self) -> dict:
        return label_order(self.n, self.k)

    def check_budget(self, max_blocks: int = DEFAULT_MAX_BLOCKS) -> None:
        if self.M > 62 or self.block_count > max_blocks:
            raise ResourceError(
                f"{self.family} n={self.n} k={self.k} needs 2^M blocks with M={self.M}, "
                f"budget is {max_blocks} blocks",
                M=self.M,
            )

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "k": self.k,
            "M": self.M,
            "block_length": self.block_length,
            "block_count": self.block_count,
        }


def layout_for(family: str, n: int, k: int) -> BlockLayout:
    if family not in (DIAMOND, LAAKSO):
        raise DomainError(f"unknown family {family!r}")
    return BlockLayout(family, n, k)


def _check_signs(m: int, eps) -> tuple:
    eps = tuple(int(e) for e in eps)
    if len(eps) > m:
        raise DomainError(f"sign tuple of length {len(eps)} exceeds depth {m}")
    if any(e not in (1, -1) for e in eps):
        raise DomainError(f"sign tuple entries must be +1 or -1: {eps}")
    return eps


def h_interval(m: int, eps) -> Interval:
    """``I_eps`` inside ``[1, 2**m]``: ``+`` keeps the top half, ``-`` the bottom half."""
    eps = _check_signs(m, eps)
    lo, size = 1, 2**m
    for e in eps:
        size //= 2
        if e == 1:
            lo += size
    return Interval(lo, lo + size - 1)


def reflect(m: int, j):
    """``Ref(j) = 2**(m+1) - j + 1``; works elementwise on arrays."""
    return 2 ** (m + 1) - j + 1


def h_dense(m: int, eps) -> np.ndarray:
    """Dense ``h_eps`` of length ``2**(m+1)``: ``+1`` on ``I_eps``, ``-1`` on its mirror."""
    iv = h_interval(m, eps)
    out = np.zeros(2 ** (m + 1), dtype=np.int8)
    out[iv.lo - 1 : iv.hi] = 1
    out[reflect(m, iv.hi) - 1 : reflect(m, iv.lo)] = -1
    return out


def h_vector(m: int, eps) -> SignVector:
    iv = h_interval(m, eps)
    return SignVector(((iv.lo, iv.card, 1), (reflect(m, iv.hi), iv.card, -1)))


def rademacher(layout: BlockLayout, label: tuple, nu):
    """``r_A(nu)``: ``+1`` when bit ``M - a(A)`` of ``nu`` is clear, else ``-1``.

    ``r_() = +1``.  ``nu`` may be an int or an integer numpy array.
    """
    label = tuple(label)
    M = layout.M
    if isinstance(nu, np.ndarray):
        if nu.size and (nu.min() < 0 or nu.max() >= 2**M):
            raise DomainError("block index out of range")
        if not label:
            return np.ones(nu.shape, dtype=np.int8)
        bit = M - _position(layout, label)
        return (1 - 2 * ((nu >> bit) & 1)).astype(np.int8)
    if not 0 <= nu < 2**M:
        raise DomainError(f"block index {nu} outside [0, 2^{M})")
    if not label:
        return 1
    bit = M - _position(layout, label)
    return -1 if (nu >> bit) & 1 else 1


def _position(layout: BlockLayout, label: tuple) -> int:
    try:
        return layout.order[label]
    except KeyError:
        raise DomainError(f"label {label} is not in the branch-label set") from None


def block_indices(layout: BlockLayout) -> np.ndarray:
    return np.arange(layout.block_count, dtype=np.int64)
