"""Embedding of the diamond D_{n,k} into block sequences with entries 0, +1, -1.

Each vertex image is a concatenation of ``2**M`` blocks of length ``2**(n+1)``.
Inside block ``nu`` the image is ``1_P - 1_Ref(P)`` where the positive support
``P`` is a union of dyadic intervals chosen by the Rademacher signs of the
prefixes of the vertex's branch label.

Two independent constructions are provided: the step-by-step procedure that
grows ``P`` interval by interval (:func:`inductive_blocks`) and the closed sum
of h vectors over the binary digits (:func:`formula_blocks`).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .blocks import (
    DEFAULT_MAX_BLOCKS,
    BlockLayout,
    block_indices,
    h_dense,
    h_interval,
    rademacher,
)
from .errors import DomainError
from .graphs import DIAMOND, GraphInstance, VertexLabel, build_graph, minimal_expansion
from .signvec import SignVector


def prefix_signs(layout: BlockLayout, branch: tuple, nus: np.ndarray) -> np.ndarray:
    """Row ``a`` holds ``r_{J_{a+1}}(nu)`` for the prefixes ``J_1, J_2, ...`` of ``branch``."""
    rows = [rademacher(layout, branch[: a + 1], nus) for a in range(len(branch))]
    if not rows:
        return np.zeros((0, nus.size), dtype=np.int8)
    return np.vstack(rows)


def inductive_block(n: int, digits: tuple, signs: tuple) -> np.ndarray:
    """One block built by the interval-growing procedure.

    ``digits`` is the binary expansion ``(lambda_0, ..., lambda_s)`` and
    ``signs[a-1]`` is ``r_{J_a}(nu)`` for the block at hand.
    """
    if digits[0] == 1:
        return h_dense(n, ())
    chosen = []
    eps = []
    s = len(digits) - 1
    for alpha in range(1, s + 1):
        r = signs[alpha - 1]
        if digits[alpha] == 1:
            chosen.append(h_interval(n, eps + [r]))
            if alpha == s:
                break
            eps.append(-r)
        else:
            eps.append(r)
    block = np.zeros(2 ** (n + 1), dtype=np.int8)
    for iv in chosen:
        assert not block[iv.lo - 1 : iv.hi].any(), "chosen intervals overlap"
        block[iv.lo - 1 : iv.hi] = 1
    block -= block[::-1].copy()
    return block


def _pattern_ids(signs: np.ndarray) -> np.ndarray:
    bits = (1 - signs.astype(np.int64)) // 2
    weights = np.left_shift(1, np.arange(signs.shape[0], dtype=np.int64))
    return weights @ bits if signs.shape[0] else np.zeros(signs.shape[1], dtype=np.int64)


def _check_vertex(layout: BlockLayout, v: VertexLabel):
    lvl = minimal_expansion(2, v.level)
    if lvl.depth > layout.n or len(v.branch) != lvl.depth or any(
        not 1 <= j <= layout.k for j in v.branch
    ):
        raise DomainError(f"{v} is not a vertex of D_{{{layout.n},{layout.k}}}")
    return lvl


def inductive_blocks(layout: BlockLayout, v: VertexLabel) -> np.ndarray:
    """All blocks of the image of ``v`` as a ``(2**M, 2**(n+1))`` int8 array."""
    lvl = _check_vertex(layout, v)
    nus = block_indices(layout)
    signs = prefix_signs(layout, v.branch, nus)
    ids = _pattern_ids(signs)
    # at most 2**s distinct sign patterns, so build each block shape once
    uniq, first = np.unique(ids, return_index=True)
    rows = np.zeros((int(uniq.max()) + 1 if uniq.size else 1, layout.block_length), dtype=np.int8)
    for pid, col in zip(uniq, first):
        rows[pid] = inductive_block(layout.n, lvl.digits, tuple(int(x) for x in signs[:, col]))
    return rows[ids]


def formula_blocks(layout: BlockLayout, v: VertexLabel) -> np.ndarray:
    """All blocks of the image of ``v`` from the sum of h vectors over digits."""
    lvl = _check_vertex(layout, v)
    n, L = layout.n, layout.block_length
    nus = block_indices(layout)
    if v.level == 0:
        return np.zeros((nus.size, L), dtype=np.int8)
    if v.level == 1:
        return np.tile(h_dense(n, ()), (nus.size, 1))
    signs = prefix_signs(layout, v.branch, nus).astype(np.int64)
    digits = lvl.digits
    out = np.zeros((nus.size, L), dtype=np.int16)
    rows = nus[:, None]
    for alpha in range(1, lvl.depth + 1):
        if digits[alpha] == 0:
            continue
        # theta_i = (-1)**lambda_i * r_{J_i} for i < alpha, and r_{J_alpha} last
        theta = signs[:alpha].copy()
        for i in range(1, alpha):
            if digits[i] == 1:
                theta[i - 1] = -theta[i - 1]
        lo = np.ones(nus.size, dtype=np.int64)
        for i in range(1, alpha + 1):
            lo += (theta[i - 1] == 1) * 2 ** (n - i)
        size = 2 ** (n - alpha)
        cols = lo[:, None] - 1 + np.arange(size)
        out[rows, cols] += 1
        out[rows, L - 1 - cols] -= 1
    if np.abs(out).max(initial=0) > 1:
        raise AssertionError(f"h summands of {v} overlap")
    return out.astype(np.int8)


def _flatten(blocks: np.ndarray) -> SignVector:
    return SignVector.from_dense(blocks.reshape(-1))


def embed_vertex_inductive(n: int, k: int, v: VertexLabel, max_blocks: int = DEFAULT_MAX_BLOCKS) -> SignVector:
    layout = BlockLayout(DIAMOND, n, k)
    layout.check_budget(max_blocks)
    return _flatten(inductive_blocks(layout, v))


def embed_vertex_formula(n: int, k: int, v: VertexLabel, max_blocks: int = DEFAULT_MAX_BLOCKS) -> SignVector:
    layout = BlockLayout(DIAMOND, n, k)
    layout.check_budget(max_blocks)
    return _flatten(formula_blocks(layout, v))


class EmbeddingTable:
    """Dense images of every vertex, one row per vertex in graph order."""

    def __init__(self, graph: GraphInstance, layout: BlockLayout, matrix: np.ndarray, extra=None):
        self.graph = graph
        self.layout = layout
        self.matrix = matrix
        self.extra = extra or {}
        self._cache = {}

    @property
    def vertices(self):
        return self.graph.vertices

    def row(self, v: VertexLabel) -> np.ndarray:
        return self.matrix[self.graph.index(v)]

    def image(self, v: VertexLabel) -> SignVector:
        if v not in self._cache:
            self._cache[v] = SignVector.from_dense(self.row(v))
        return self._cache[v]

    def blocks(self) -> np.ndarray:
        """View of shape ``(V, 2**M, block_length)``."""
        lay = self.layout
        return self.matrix.reshape(len(self.vertices), lay.block_count, lay.block_length)

    def positive_parts(self) -> np.ndarray:
        """Boolean ``(V, 2**M, half)`` array of the positive supports ``P(nu)``."""
        return self.blocks()[:, :, : self.layout.half] == 1

    @property
    def top_image(self) -> SignVector:
        return self.image(self.graph.top)

    def to_json(self) -> dict:
        return {
            "layout": self.layout.to_json(),
            "vertices": [str(v) for v in self.vertices],
            "images": {str(v): self.image(v).to_json() for v in self.vertices},
        }


def embed_all(n: int, k: int, method: str = "inductive", max_blocks: int = DEFAULT_MAX_BLOCKS,
              graph: GraphInstance | None = None) -> EmbeddingTable:
    """Images of all vertices of ``D_{n,k}``; refuses layouts beyond ``max_blocks``."""
    layout = BlockLayout(DIAMOND, n, k)
    layout.check_budget(max_blocks)
    g = graph if graph is not None else build_graph(DIAMOND, n, k)
    build = {"inductive": inductive_blocks, "formula": formula_blocks}[method]
    matrix = np.empty((len(g.vertices), layout.length), dtype=np.int8)
    for i, v in enumerate(g.vertices):
        matrix[i] = build(layout, v).reshape(-1)
    return EmbeddingTable(g, layout, matrix)


# Structural checks.  Each returns a list of violation witnesses (empty = pass).

def check_cardinality(table: EmbeddingTable, base: int = 2):
    """``|P(nu)| = half * level`` in every block."""
    lay = table.layout
    counts = table.positive_parts().sum(axis=2)
    bad = []
    for i, v in enumerate(table.vertices):
        want = v.level * lay.half
        assert want.denominator == 1
        wrong = np.flatnonzero(counts[i] != int(want))
        if wrong.size:
            bad.append((str(v), int(wrong[0]), int(counts[i, wrong[0]]), int(want)))
    return bad


def check_block_symmetry(table: EmbeddingTable):
    """Each block equals ``1_P - 1_Ref(P)`` with ``P`` inside the first half."""
    blocks = table.blocks()
    half = table.layout.half
    bad = []
    sym = (blocks == -blocks[:, :, ::-1]).all(axis=2)
    pos_ok = (blocks[:, :, :half] >= 0).all(axis=2)
    for i, j in zip(*np.nonzero(~(sym & pos_ok))):
        bad.append((str(table.vertices[i]), int(j)))
    return bad


def check_monotone_supports(table: EmbeddingTable, reach: np.ndarray):
    """``P_u(nu)`` is contained in ``P_v(nu)`` whenever ``v`` lies directly above ``u``."""
    P = table.positive_parts()
    bad = []
    for i, j in zip(*np.nonzero(reach)):
        if i == j:
            continue
        if (P[i] & ~P[j]).any():
            bad.append((str(table.vertices[i]), str(table.vertices[j])))
    return bad


def check_edge_law(table: EmbeddingTable):
    """Across an edge the positive part of the difference is one coordinate per block."""
    g = table.graph
    half = table.layout.half
    blocks = table.blocks()
    bad = []
    for u, w in g.edges:
        diff = blocks[g.index(w)].astype(np.int16) - blocks[g.index(u)]
        pos = diff[:, :half]
        ok = ((pos == 1).sum(axis=1) == 1) & ((pos == 0) | (pos == 1)).all(axis=1)
        ok &= (diff == -diff[:, ::-1]).all(axis=1)
        if not ok.all():
            bad.append((str(u), str(w), int(np.flatnonzero(~ok)[0])))
    return bad


# Pairwise case analysis with closed-form distances.

@dataclass(frozen=True)
class PairCase:
    case: int
    beta: int | None
    distance: Fraction
    K: int


def _tail(lvl, start: int) -> Fraction:
    return sum((Fraction(lvl.digit(a), 2**a) for a in range(start, lvl.depth + 1)), Fraction(0))


def classify_pair(u: VertexLabel, v: VertexLabel) -> PairCase:
    """Case 0 (top or bottom involved) or cases 1-5, with the predicted distance."""
    if u == v:
        raise DomainError("classification needs two distinct vertices")
    lam, mu = u.level, v.level
    if lam in (0, 1) or mu in (0, 1):
        return PairCase(0, None, abs(lam - mu), 1)
    L, Mu = minimal_expansion(2, lam), minimal_expansion(2, mu)
    J, I = u.branch, v.branch
    top = min(L.depth, Mu.depth)
    B = [a for a in range(1, top + 1) if J[a - 1] != I[a - 1] or L.digit(a) != Mu.digit(a)]
    if not B:
        return PairCase(1, None, abs(lam - mu), 1)
    beta = B[0]
    lb, mb = L.digit(beta), Mu.digit(beta)
    if J[beta - 1] == I[beta - 1]:
        assert lb != mb
        return PairCase(2, beta, abs(lam - mu), 1)
    if lb == mb == 0:
        delta = max((a for a in range(0, beta) if L.digit(a) == Mu.digit(a) == 1), default=0)
        omega = L.truncate(delta)
        assert omega == Mu.truncate(delta)
        return PairCase(3, beta, (lam - omega) + (mu - omega), 8)
    if lb == mb == 1:
        d = Fraction(2, 2**beta) - ((lam - L.truncate(beta)) + (mu - Mu.truncate(beta)))
        return PairCase(4, beta, d, 8)
    # S is the route through the bottom of the common height-2**(1-beta)
    # subdiamond; the route through its top has length 2 * 2**(1-beta) - S.
    S = _tail(L, beta) + _tail(Mu, beta)
    return PairCase(5, beta, min(S, Fraction(4, 2**beta) - S), 8)
