"""Embedding of the Laakso graph L_{n,k} built level by level from v- and v+.

A vertex ``v`` whose level has ``t+1`` base-4 digits sits between ``v-`` and
``v+``, whose positive supports differ (in every block) by one dyadic interval
``I_E`` with ``E = eps(v-, v+, nu)``.  The last digit of the level decides which
quarter-intervals of ``I_E`` are added to ``P(v-)``.  The tuples for the new
consecutive pairs are recorded while building, so the single-interval property
of every ``(w-, w+)`` pair is produced rather than searched for.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .blocks import DEFAULT_MAX_BLOCKS, BlockLayout, block_indices, rademacher
from .diamond import EmbeddingTable
from .errors import DomainError
from .graphs import (
    LAAKSO,
    GraphInstance,
    VertexLabel,
    build_graph,
    laakso_vplus_vminus,
    upward_reachability,
)


def _longer(a: tuple, b: tuple) -> tuple:
    short, long_ = sorted((a, b), key=len)
    assert long_[: len(short)] == short, f"labels {a} and {b} are not prefix-related"
    return long_


def _append(E: np.ndarray, *cols) -> np.ndarray:
    """Extend every block's sign tuple by the given columns (scalars or arrays)."""
    B = E.shape[0]
    extra = [np.broadcast_to(np.asarray(c, dtype=np.int8), (B,)) for c in cols]
    return np.column_stack([E] + extra).astype(np.int8) if extra else E


def interval_mask(E: np.ndarray, m: int) -> np.ndarray:
    """Boolean ``(B, 2**m)`` mask of ``I_{E[nu]}`` for every block."""
    B, length = E.shape
    lo = np.zeros(B, dtype=np.int64)
    for i in range(length):
        lo += (E[:, i] == 1) * 2 ** (m - i - 1)
    size = 2 ** (m - length)
    pos = np.arange(2**m)
    return (pos >= lo[:, None]) & (pos < lo[:, None] + size)


@dataclass
class LaaksoState:
    """Positive supports ``P(v, nu)`` and the recorded tuples ``eps(w-, w+, nu)``."""

    graph: GraphInstance
    layout: BlockLayout
    P: dict
    eps: dict = field(default_factory=dict)

    def table(self) -> EmbeddingTable:
        V = len(self.graph.vertices)
        lay = self.layout
        blocks = np.zeros((V, lay.block_count, lay.block_length), dtype=np.int8)
        for i, v in enumerate(self.graph.vertices):
            pos = self.P[v].astype(np.int8)
            blocks[i, :, : lay.half] = pos
            blocks[i, :, lay.half :] = -pos[:, ::-1]
        return EmbeddingTable(self.graph, lay, blocks.reshape(V, -1), extra={"state": self})


def build_laakso_state(n: int, k: int, max_blocks: int = DEFAULT_MAX_BLOCKS,
                       graph: GraphInstance | None = None) -> LaaksoState:
    layout = BlockLayout(LAAKSO, n, k)
    layout.check_budget(max_blocks)
    g = graph if graph is not None else build_graph(LAAKSO, n, k)
    m = layout.m
    nus = block_indices(layout)
    B = nus.size

    def r(label):
        return rademacher(layout, label, nus)

    P = {g.bottom: np.zeros((B, 2**m), dtype=bool), g.top: np.ones((B, 2**m), dtype=bool)}
    eps = {(g.bottom, g.top): np.zeros((B, 0), dtype=np.int8)}
    by_depth = {}
    for v in g.vertices:
        by_depth.setdefault(g.level(v).depth, []).append(v)
    for t1 in range(1, n + 1):
        step = Fraction(1, 4**t1)
        for v in by_depth.get(t1, []):
            lvl = g.level(v)
            vm, vp = laakso_vplus_vminus(g, v)
            E = eps[(vm, vp)]
            star = _longer(vm.branch, vp.branch)
            digit = lvl.digits[t1]
            if digit == 1:
                a = _append(E, -1, r(v.branch))
                P[v] = P[vm] | interval_mask(a, m)
                eps[(vm, v)] = a
            elif digit == 2:
                assert v.branch[:-1] == star and len(v.branch) == len(star) + 1
                rs, rj = r(star), r(v.branch)
                P[v] = P[vm] | interval_mask(_append(E, -1, rs), m) | interval_mask(_append(E, 1, rj), m)
                below = VertexLabel(v.level - step, star)
                above = VertexLabel(v.level + step, star)
                assert below in g and above in g
                eps[(below, v)] = _append(E, 1, rj)
                eps[(v, above)] = _append(E, 1, -rj)
            else:
                rj = r(v.branch)
                P[v] = P[vm] | interval_mask(_append(E, -1, rj), m) | interval_mask(_append(E, 1), m)
                eps[(v, vp)] = _append(E, -1, -rj)
    return LaaksoState(g, layout, P, eps)


def embed_all_laakso(n: int, k: int, max_blocks: int = DEFAULT_MAX_BLOCKS) -> EmbeddingTable:
    return build_laakso_state(n, k, max_blocks).table()


def embed_laakso_vertex(n: int, k: int, v: VertexLabel, max_blocks: int = DEFAULT_MAX_BLOCKS):
    table = embed_all_laakso(n, k, max_blocks)
    return table.image(v)


def laakso_warmup_table(k: int) -> EmbeddingTable:
    """The hand-written images of ``L_{1,k}`` with ``s_1`` on ``h_{--}``.

    ``t -> h``, ``t_1 -> h_{--} + h_{+-} + h_{++}``, ``s_1 -> h_{--}`` and
    ``v_i -> h_{--} + h_{+, r_i(nu)}`` in every block.
    """
    layout = BlockLayout(LAAKSO, 1, k)
    g = build_graph(LAAKSO, 1, k)
    nus = block_indices(layout)
    B = nus.size
    quarter = {(-1, -1): 0, (-1, 1): 1, (1, -1): 2, (1, 1): 3}
    P = {}
    for v in g.vertices:
        mask = np.zeros((B, 4), dtype=bool)
        if v.level == 1:
            mask[:] = True
        elif v.level == Fraction(1, 4):
            mask[:, quarter[(-1, -1)]] = True
        elif v.level == Fraction(3, 4):
            mask[:, [quarter[(-1, -1)], quarter[(1, -1)], quarter[(1, 1)]]] = True
        elif v.level == Fraction(1, 2):
            ri = rademacher(layout, v.branch, nus)
            mask[:, quarter[(-1, -1)]] = True
            mask[np.arange(B), np.where(ri == 1, quarter[(1, 1)], quarter[(1, -1)])] = True
        P[v] = mask
    return LaaksoState(g, layout, P).table()


# Verification of the support conditions.

def decompose(mask: np.ndarray, m: int) -> list:
    """Smallest family of intervals ``I_eps`` whose union is ``mask`` (length ``2**m``).

    Recursive halving: a fully covered interval is taken whole, so no two
    sibling halves ever both appear.
    """
    cache = {}

    def rec(lo: int, size: int, prefix: tuple):
        seg = mask[lo : lo + size]
        if seg.all():
            return [prefix]
        if not seg.any():
            return []
        key = (seg.tobytes(), len(prefix))
        if key in cache:
            return [prefix + tail for tail in cache[key]]
        half = size // 2
        out = rec(lo, half, prefix + (-1,)) + rec(lo + half, half, prefix + (1,))
        cache[key] = [e[len(prefix):] for e in out]
        return out

    return rec(0, 2**m, ())


@dataclass
class ConditionReport:
    pairs_checked: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def _mask_of(eps: tuple, m: int) -> np.ndarray:
    return interval_mask(np.asarray([eps], dtype=np.int8).reshape(1, -1), m)[0]


def verify_c_conditions(state: LaaksoState) -> ConditionReport:
    """Check containment and the interval-family conditions for every vertical pair.

    For ``v`` directly above ``u`` and each block, ``P(v) \\ P(u)`` must be the
    disjoint union of a family ``A`` of intervals (C1) avoiding ``P(u)`` (C2)
    with no sibling pair (C3).  For each interior ``w`` the family for
    ``(w-, w+)`` must be the single recorded tuple (C4).
    """
    g, m = state.graph, state.layout.m
    reach = upward_reachability(g)
    failures = []
    pairs = 0
    memo = {}
    for i, u in enumerate(g.vertices):
        for j, v in enumerate(g.vertices):
            if i == j or not reach[i, j]:
                continue
            pairs += 1
            Pu, Pv = state.P[u], state.P[v]
            if (Pu & ~Pv).any():
                failures.append(("containment", str(u), str(v)))
                continue
            D = Pv & ~Pu
            for nu in range(D.shape[0]):
                key = D[nu].tobytes()
                if key not in memo:
                    memo[key] = _family_problems(D[nu], m)
                problem = memo[key]
                if problem:
                    failures.append((problem, str(u), str(v), nu))
                    break
    for w in g.vertices:
        if w.level in (0, 1):
            continue
        wm, wp = laakso_vplus_vminus(g, w)
        recorded = state.eps.get((wm, wp))
        if recorded is None:
            failures.append(("C4-missing", str(wm), str(wp)))
            continue
        D = state.P[wp] & ~state.P[wm]
        for nu in range(D.shape[0]):
            fam = decompose(D[nu], m)
            if fam != [tuple(int(x) for x in recorded[nu])]:
                failures.append(("C4", str(w), nu, fam))
                break
    return ConditionReport(pairs, failures)


def _family_problems(D: np.ndarray, m: int):
    fam = decompose(D, m)
    union = np.zeros_like(D)
    for e in fam:
        part = _mask_of(e, m)
        if (union & part).any():
            return "C1"
        union |= part
    if not np.array_equal(union, D):
        return "cover"
    members = set(fam)
    for e in fam:
        if e and e[:-1] + (-e[-1],) in members:
            return "C3"
    return None


def a_family(state: LaaksoState, u: VertexLabel, v: VertexLabel, nu: int) -> list:
    """The interval family ``A(v, u, nu)`` for ``v`` directly above ``u``."""
    D = state.P[v][nu] & ~state.P[u][nu]
    if (state.P[u][nu] & ~state.P[v][nu]).any():
        raise DomainError(f"{v} is not above {u} in block {nu}")
    return decompose(D, state.layout.m)


# Meeting-vertex analysis for incomparable pairs.

@dataclass
class MeetingReport:
    below: int
    above: int
    missing: list

    @property
    def passed(self) -> bool:
        return not self.missing


def meeting_vertices(g: GraphInstance) -> MeetingReport:
    """For every incomparable pair find ``w`` on a geodesic, directly below or above both."""
    reach = upward_reachability(g)
    units = g.metric.units
    V = len(g.vertices)
    below = above = 0
    missing = []
    for i in range(V):
        for j in range(i + 1, V):
            if reach[i, j] or reach[j, i]:
                continue
            on_geo = units[i] + units[j] == units[i, j]
            if (on_geo & reach[:, i] & reach[:, j]).any():
                below += 1
            elif (on_geo & reach[i, :] & reach[j, :]).any():
                above += 1
            else:
                missing.append((str(g.vertices[i]), str(g.vertices[j])))
    return MeetingReport(below, above, missing)
