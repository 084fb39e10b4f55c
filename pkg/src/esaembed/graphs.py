"""Multibranching diamond and Laakso graphs with level/branch labels.

Vertices are identified by a :class:`VertexLabel` ``(level, branch)`` where
``level`` is the exact distance from the bottom vertex (top at distance 1) and
``branch`` is the tuple of branch indices.  Distances are kept as integers in
units of the smallest edge weight (``2**-n`` for diamonds, ``4**-n`` for Laakso
graphs); nothing in this module touches floating point.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

DIAMOND = "diamond"
LAAKSO = "laakso"
FAMILIES = (DIAMOND, LAAKSO)
BASE = {DIAMOND: 2, LAAKSO: 4}

ABOVE = "above"
BELOW = "below"
INCOMPARABLE = "incomparable"


def frac_str(x) -> str:
    """Render an exact rational as ``"p/q"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class Level:
    """Base-2 or base-4 expansion ``value = sum(digits[a] / base**a)``.

    ``digits[0]`` is the integer digit (nonzero only for the value 1) and the
    last digit is nonzero unless the value is 0.
    """

    base: int
    digits: tuple

    @property
    def depth(self) -> int:
        return len(self.digits) - 1

    @property
    def value(self) -> Fraction:
        return sum((Fraction(d, self.base**a) for a, d in enumerate(self.digits)), Fraction(0))

    def digit(self, alpha: int) -> int:
        return self.digits[alpha] if alpha < len(self.digits) else 0

    def truncate(self, tau: int) -> Fraction:
        """``R_tau``: the value of the digits up to and including position ``tau``."""
        return sum((Fraction(d, self.base**a) for a, d in enumerate(self.digits[: tau + 1])), Fraction(0))

    def __str__(self) -> str:
        return frac_str(self.value)


def level_expansion(base: int, value, n: int) -> Level:
    """Expansion of ``value`` in ``base`` using at most ``n`` fractional digits."""
    if base not in (2, 4):
        raise DomainError(f"base must be 2 or 4, got {base}")
    if n < 0:
        raise DomainError(f"depth bound must be nonnegative, got {n}")
    value = Fraction(value)
    if not 0 <= value <= 1:
        raise DomainError(f"level {value} outside [0, 1]")
    scaled = value * base**n
    if scaled.denominator != 1:
        raise DomainError(f"{value} is not representable with {n} base-{base} digits")
    if value == 1:
        return Level(base, (1,))
    m = scaled.numerator
    frac_digits = []
    for _ in range(n):
        m, d = divmod(m, base)
        frac_digits.append(d)
    digits = [0] + frac_digits[::-1]
    while len(digits) > 1 and digits[-1] == 0:
        digits.pop()
    return Level(base, tuple(digits))


def minimal_expansion(base: int, value) -> Level:
    """Expansion with the depth read off the denominator of ``value``."""
    value = Fraction(value)
    n = 0
    while (value * base**n).denominator != 1:
        n += 1
        if n > 512:
            raise DomainError(f"{value} is not a base-{base} rational")
    return level_expansion(base, value, n)


@dataclass(frozen=True)
class VertexLabel:
    """Canonical vertex identity: exact level plus branch tuple."""

    level: Fraction
    branch: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "level", Fraction(self.level))
        object.__setattr__(self, "branch", tuple(int(j) for j in self.branch))

    def sort_key(self):
        return (self.level, self.branch)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{frac_str(self.level)}:{','.join(str(j) for j in self.branch)}"

    @classmethod
    def parse(cls, text: str) -> "VertexLabel":
        lvl, _, br = text.partition(":")
        return cls(Fraction(lvl), tuple(int(j) for j in br.split(",") if j))

    def to_json(self) -> dict:
        return {"level": frac_str(self.level), "branch": list(self.branch)}

    @classmethod
    def from_json(cls, obj) -> "VertexLabel":
        if isinstance(obj, str):
            return cls.parse(obj)
        return cls(Fraction(obj["level"]), tuple(obj["branch"]))


def _longer(a: tuple, b: tuple) -> tuple:
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)
    assert long_[: len(short)] == short, f"labels {a} and {b} are not prefix-related"
    return long_


class MetricTable:
    """Exact shortest-path metric stored as integer multiples of ``unit``."""

    def __init__(self, graph: "GraphInstance", units: np.ndarray):
        self.graph = graph
        self.units = units
        self.unit = graph.unit

    def units_between(self, u, v) -> int:
        g = self.graph
        return int(self.units[g.index(u), g.index(v)])

    def __call__(self, u, v) -> Fraction:
        return self.units_between(u, v) * self.unit

    distance = __call__

    def items(self):
        """Unordered pairs ``(u, v, d(u, v))`` in canonical vertex order."""
        vs = self.graph.vertices
        for i, j in itertools.combinations(range(len(vs)), 2):
            yield vs[i], vs[j], int(self.units[i, j]) * self.unit


class GraphInstance:
    """A labelled diamond ``D_{n,k}`` or Laakso graph ``L_{n,k}``.

    Immutable after construction; vertices are kept in level-then-branch order.
    """

    def __init__(self, family: str, n: int, k: int, vertices, edges):
        self.family = family
        self.n = n
        self.k = k
        self.base = BASE[family]
        self.unit = Fraction(1, self.base**n)
        self.vertices = tuple(sorted(vertices, key=VertexLabel.sort_key))
        self._index = {v: i for i, v in enumerate(self.vertices)}
        oriented = [(u, w) if u.level < w.level else (w, u) for u, w in edges]
        self.edges = tuple(sorted(oriented, key=lambda e: (self._index[e[0]], self._index[e[1]])))
        self._metric = None

    def __repr__(self):
        return f"GraphInstance({self.family!r}, n={self.n}, k={self.k}, |V|={len(self.vertices)}, |E|={len(self.edges)})"

    @property
    def bottom(self) -> VertexLabel:
        return self.vertices[0]

    @property
    def top(self) -> VertexLabel:
        return self.vertices[-1]

    def index(self, v: VertexLabel) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise DomainError(f"{v} is not a vertex of {self!r}") from None

    def __contains__(self, v) -> bool:
        return v in self._index

    def level(self, v: VertexLabel) -> Level:
        return level_expansion(self.base, v.level, self.n)

    def level_units(self, v: VertexLabel) -> int:
        return int(v.level * self.base**self.n)

    def adjacency(self) -> list:
        adj = [[] for _ in self.vertices]
        for u, w in self.edges:
            i, j = self._index[u], self._index[w]
            adj[i].append(j)
            adj[j].append(i)
        return adj

    @property
    def metric(self) -> MetricTable:
        if self._metric is None:
            self._metric = all_pairs_metric(self)
        return self._metric

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "k": self.k,
            "unit": frac_str(self.unit),
            "vertices": [dict(id=i, **v.to_json()) for i, v in enumerate(self.vertices)],
            "edges": [[self._index[u], self._index[w]] for u, w in self.edges],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    def to_dot(self) -> str:
        lines = [f'graph "{self.family}_{self.n}_{self.k}" {{', "\trankdir=BT;", "\tnode [shape=circle, fontsize=9];"]
        by_level = {}
        for i, v in enumerate(self.vertices):
            by_level.setdefault(v.level, []).append(i)
        for lvl in sorted(by_level):
            ids = " ".join(f"v{i};" for i in by_level[lvl])
            lines.append(f"\t{{ rank=same; {ids} }}")
        for i, v in enumerate(self.vertices):
            branch = ",".join(str(j) for j in v.branch) or "-"
            lines.append(f'\tv{i} [label="{frac_str(v.level)}\\n{branch}"];')
        for u, w in self.edges:
            lines.append(f"\tv{self._index[u]} -- v{self._index[w]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def expected_counts(family: str, n: int, k: int):
    """Vertex and edge counts from the recursion ``V_n = V_{n-1} + c*E_{n-1}``."""
    new_per_edge, edges_per_edge = (k, 2 * k) if family == DIAMOND else (k + 2, 2 * k + 2)
    V, E = 2, 1
    for _ in range(n):
        V, E = V + new_per_edge * E, edges_per_edge * E
    return V, E


def build_graph(family: str, n: int, k: int) -> GraphInstance:
    """Build ``D_{n,k}`` or ``L_{n,k}`` by repeated edge rewriting."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if not isinstance(k, int) or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k!r}")
    bottom, top = VertexLabel(0), VertexLabel(1)
    vertices = {bottom, top}
    edges = [(bottom, top)]
    for _ in range(n):
        rewritten = []
        for u, w in edges:
            star = _longer(u.branch, w.branch)
            if family == DIAMOND:
                mid = (u.level + w.level) / 2
                for j in range(1, k + 1):
                    x = VertexLabel(mid, star + (j,))
                    vertices.add(x)
                    rewritten += [(u, x), (x, w)]
            else:
                step = (w.level - u.level) / 4
                a = VertexLabel(u.level + step, star)
                c = VertexLabel(u.level + 3 * step, star)
                vertices.update((a, c))
                rewritten.append((u, a))
                for j in range(1, k + 1):
                    b = VertexLabel(u.level + 2 * step, star + (j,))
                    vertices.add(b)
                    rewritten += [(a, b), (b, c)]
                rewritten.append((c, w))
        edges = rewritten
    V, E = expected_counts(family, n, k)
    # labels are injective by construction; a merge here would mean a labelling bug
    assert len(vertices) == V, f"label collision: {len(vertices)} labels for {V} vertices"
    assert len(set(edges)) == E == len(edges)
    return GraphInstance(family, n, k, vertices, edges)


def all_pairs_metric(g: GraphInstance) -> MetricTable:
    """Breadth-first search from every vertex; distances in units of ``g.unit``."""
    adj = g.adjacency()
    size = len(g.vertices)
    units = np.full((size, size), -1, dtype=np.int64)
    for src in range(size):
        row = units[src]
        row[src] = 0
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if row[y] < 0:
                    row[y] = row[x] + 1
                    queue.append(y)
    if (units < 0).any():
        raise DomainError("graph is not connected")
    assert units[0, size - 1] == g.base**g.n, "top and bottom must be at distance 1"
    return MetricTable(g, units)


def subdiamond(v: VertexLabel, tau: int):
    """Bottom and top of the height ``2**-tau`` subdiamond containing ``v``."""
    lvl = minimal_expansion(2, v.level)
    if v.level == 1:
        raise DomainError("the top vertex has no proper nested subdiamonds")
    if not 0 <= tau <= lvl.depth:
        raise DomainError(f"tau={tau} outside [0, {lvl.depth}]")
    if len(v.branch) != lvl.depth:
        raise DomainError(f"{v} is not a diamond label")
    lo = lvl.truncate(tau)
    hi = lo + Fraction(1, 2**tau)
    s_lo = minimal_expansion(2, lo).depth
    s_hi = minimal_expansion(2, hi).depth
    return VertexLabel(lo, v.branch[:s_lo]), VertexLabel(hi, v.branch[:s_hi])


def vertical_relation(g: GraphInstance, u: VertexLabel, v: VertexLabel) -> str:
    """Whether ``u`` is directly below/above ``v`` or incomparable.

    Every vertex lies on a bottom-top geodesic and edges change the level by one
    unit, so a direct vertical path joins ``u`` and ``v`` exactly when their
    distance equals their level difference.
    """
    if u == v:
        raise DomainError("vertical relation needs two distinct vertices")
    d = g.metric(u, v)
    if u.level < v.level and d == v.level - u.level:
        return BELOW
    if u.level > v.level and d == u.level - v.level:
        return ABOVE
    return INCOMPARABLE


def upward_reachability(g: GraphInstance) -> np.ndarray:
    """Boolean matrix ``R[i, j]``: a level-increasing edge path leads from i to j.

    Computed from the edge list alone, independently of the metric, so it serves
    as a second route to :func:`vertical_relation`.
    """
    size = len(g.vertices)
    reach = np.zeros((size, size), dtype=bool)
    up = [[] for _ in range(size)]
    for u, w in g.edges:
        up[g.index(u)].append(g.index(w))
    for i in reversed(range(size)):
        reach[i, i] = True
        for j in up[i]:
            reach[i] |= reach[j]
    return reach


def laakso_vplus_vminus(g: GraphInstance, v: VertexLabel):
    """The unique vertices every geodesic from ``v`` to the bottom/top passes."""
    if g.family != LAAKSO:
        raise DomainError("v+/v- are defined for Laakso graphs")
    lvl = g.level(v)
    if v not in g:
        raise DomainError(f"{v} is not a vertex of {g!r}")
    t = lvl.depth
    if t == 0:
        raise DomainError("the top and bottom vertices have no v+/v-")
    last = lvl.digits[t]
    lam_plus = v.level + Fraction(4 - last, 4**t)
    lam_minus = v.level - Fraction(last, 4**t)

    def unique_at(target):
        hits = [x for x in g.vertices if x.level == target and g.metric(v, x) == abs(target - v.level)]
        assert len(hits) == 1, f"uniqueness fails for {v} at level {target}: {hits}"
        return hits[0]

    return unique_at(lam_minus), unique_at(lam_plus)
