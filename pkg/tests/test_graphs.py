from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from esaembed.errors import DomainError
from esaembed.graphs import (
    ABOVE,
    BELOW,
    DIAMOND,
    INCOMPARABLE,
    LAAKSO,
    VertexLabel,
    build_graph,
    expected_counts,
    laakso_vplus_vminus,
    level_expansion,
    minimal_expansion,
    subdiamond,
    upward_reachability,
    vertical_relation,
)

import oracles

SMALL = [(DIAMOND, n, k) for n, k in [(0, 3), (1, 2), (1, 3), (2, 2), (2, 3), (3, 2)]] + [
    (LAAKSO, n, k) for n, k in [(0, 2), (1, 2), (1, 3), (2, 2)]
]


def V(level, *branch):
    return VertexLabel(Fraction(level), branch)


def test_level_expansion_examples():
    lvl = level_expansion(2, Fraction(13, 16), 4)
    assert lvl.digits == (0, 1, 1, 0, 1)
    assert lvl.depth == 4
    assert level_expansion(2, 0, 3).depth == 0
    one = level_expansion(2, 1, 3)
    assert one.digits[0] == 1 and one.depth == 0
    assert level_expansion(4, Fraction(6, 16), 2).digits == (0, 1, 2)


def test_level_expansion_rejects_unrepresentable():
    with pytest.raises(DomainError):
        level_expansion(2, Fraction(1, 3), 5)
    with pytest.raises(DomainError):
        level_expansion(2, Fraction(1, 8), 2)
    with pytest.raises(DomainError):
        level_expansion(4, Fraction(5, 4), 2)


@given(st.sampled_from([2, 4]), st.integers(0, 6), st.data())
def test_level_expansion_roundtrip(base, n, data):
    m = data.draw(st.integers(0, base**n))
    value = Fraction(m, base**n)
    lvl = level_expansion(base, value, n)
    assert lvl.value == value
    assert lvl.depth <= n
    if value != 0:
        assert lvl.digits[-1] != 0
    assert lvl.digits[0] in (0, 1) and (lvl.digits[0] == 0 or value == 1)


def test_truncation():
    lvl = minimal_expansion(2, Fraction(13, 16))
    assert [lvl.truncate(t) for t in range(5)] == [0, Fraction(1, 2), Fraction(3, 4), Fraction(3, 4), Fraction(13, 16)]


@pytest.mark.parametrize("family,n,k", SMALL)
def test_counts_match_rewriting_oracle(family, n, k):
    g = build_graph(family, n, k)
    Vo, edges = oracles.rewrite_graph(family, n, k)
    assert len(g.vertices) == Vo
    assert len(g.edges) == len(edges)
    assert (len(g.vertices), len(g.edges)) == expected_counts(family, n, k)


def test_count_examples():
    assert (len(build_graph(DIAMOND, 0, 3).vertices), len(build_graph(DIAMOND, 0, 3).edges)) == (2, 1)
    g = build_graph(DIAMOND, 2, 2)
    assert (len(g.vertices), len(g.edges)) == (12, 16)
    g = build_graph(LAAKSO, 1, 3)
    assert (len(g.vertices), len(g.edges)) == (7, 8)
    for k in range(2, 6):
        g = build_graph(LAAKSO, 1, k)
        assert (len(g.vertices), len(g.edges)) == (k + 4, 2 * k + 2)
        assert len(build_graph(DIAMOND, 3, k).edges) == (2 * k) ** 3


def test_build_graph_rejects_bad_parameters():
    with pytest.raises(DomainError):
        build_graph(DIAMOND, 1, 1)
    with pytest.raises(DomainError):
        build_graph(DIAMOND, -1, 2)
    with pytest.raises(DomainError):
        build_graph("tree", 1, 2)


@pytest.mark.parametrize("family,n,k", SMALL)
def test_metric_matches_floyd_warshall(family, n, k):
    g = build_graph(family, n, k)
    units = g.metric.units
    ours = sorted(int(units[i, j]) for i in range(len(g.vertices)) for j in range(i + 1, len(g.vertices)))
    assert ours == oracles.distance_multiset(family, n, k)
    assert g.metric(g.bottom, g.top) == 1


@pytest.mark.parametrize("family,n,k", SMALL)
def test_edges_change_level_by_one_unit(family, n, k):
    g = build_graph(family, n, k)
    for u, w in g.edges:
        assert w.level - u.level == g.unit


@pytest.mark.parametrize("family,n,k", SMALL)
def test_metric_axioms(family, n, k):
    g = build_graph(family, n, k)
    d = g.metric.units
    assert (d == d.T).all() and (np.diag(d) == 0).all()
    assert (d[:, :, None] <= d[:, None, :] + d.T[None, :, :]).all()


def test_warmup_midpoints_at_distance_one():
    g = build_graph(DIAMOND, 1, 4)
    for i in range(1, 5):
        for j in range(i + 1, 5):
            assert g.metric(V(Fraction(1, 2), i), V(Fraction(1, 2), j)) == 1


def test_isometric_nesting():
    for family, k in [(DIAMOND, 2), (DIAMOND, 3), (LAAKSO, 2)]:
        small, big = build_graph(family, 1, k), build_graph(family, 2, k)
        for u in small.vertices:
            for v in small.vertices:
                assert small.metric(u, v) == big.metric(u, v)


@pytest.mark.parametrize("family,n,k", SMALL)
def test_vertical_relation_matches_reachability(family, n, k):
    g = build_graph(family, n, k)
    reach = upward_reachability(g)
    for i, u in enumerate(g.vertices):
        for j, v in enumerate(g.vertices):
            if i == j:
                continue
            rel = vertical_relation(g, u, v)
            expected = BELOW if reach[i, j] else ABOVE if reach[j, i] else INCOMPARABLE
            assert rel == expected
            if rel != INCOMPARABLE:
                assert g.metric(u, v) == abs(u.level - v.level)


def test_vertical_relation_examples():
    g = build_graph(DIAMOND, 2, 2)
    assert vertical_relation(g, V(Fraction(1, 2), 1), V(Fraction(3, 4), 1, 2)) == BELOW
    assert vertical_relation(g, V(Fraction(3, 4), 1, 2), V(Fraction(1, 2), 1)) == ABOVE
    g1 = build_graph(DIAMOND, 1, 3)
    assert vertical_relation(g1, V(Fraction(1, 2), 1), V(Fraction(1, 2), 2)) == INCOMPARABLE
    lg = build_graph(LAAKSO, 1, 3)
    assert vertical_relation(lg, V(Fraction(1, 4)), V(Fraction(1, 2), 2)) == BELOW


def test_vertical_pairs_need_not_have_prefix_branches():
    # neither branch tuple is a prefix of the other, yet a direct vertical path exists
    g = build_graph(DIAMOND, 2, 2)
    assert vertical_relation(g, V(Fraction(1, 4), 1, 1), V(Fraction(3, 4), 1, 2)) == BELOW
    lg = build_graph(LAAKSO, 2, 2)
    assert vertical_relation(lg, V(Fraction(2, 16), 2), V(Fraction(6, 16), 1, 2)) == BELOW


def test_subdiamond_examples():
    v = V(Fraction(13, 16), 1, 2, 3, 4)
    assert subdiamond(v, 2) == (V(Fraction(3, 4), 1, 2), V(1))
    assert subdiamond(v, 4) == (v, V(Fraction(7, 8), 1, 2, 3))
    assert subdiamond(v, 0) == (V(0), V(1))
    with pytest.raises(DomainError):
        subdiamond(V(1), 0)


def test_subdiamonds_are_nested():
    g = build_graph(DIAMOND, 3, 2)
    for v in g.vertices:
        if v.level in (0, 1):
            continue
        s = minimal_expansion(2, v.level).depth
        prev = None
        for tau in range(s + 1):
            lo, hi = subdiamond(v, tau)
            assert lo in g and hi in g
            assert g.metric(lo, v) + g.metric(v, hi) == g.metric(lo, hi) == Fraction(1, 2**tau)
            if prev is not None:
                assert g.metric(prev[0], lo) + g.metric(lo, hi) + g.metric(hi, prev[1]) == g.metric(*prev)
            prev = (lo, hi)


def test_vplus_vminus_formula():
    g = build_graph(LAAKSO, 1, 3)
    assert laakso_vplus_vminus(g, V(Fraction(1, 4))) == (V(0), V(1))
    # level 2/4 has last digit 2, so both neighbours in the formula sit at levels 0 and 1
    assert laakso_vplus_vminus(g, V(Fraction(1, 2), 2)) == (V(0), V(1))
    with pytest.raises(DomainError):
        laakso_vplus_vminus(g, g.top)


def _all_geodesics_pass(g, v, w):
    """Brute force: every geodesic from v to the top (or bottom, if w is below v) passes w."""
    adj = g.adjacency()
    idx = {x: i for i, x in enumerate(g.vertices)}
    d = g.metric.units
    target = g.index(g.top) if w.level > v.level else g.index(g.bottom)
    paths = [[idx[v]]]
    done = []
    while paths:
        p = paths.pop()
        if p[-1] == target:
            done.append(p)
            continue
        for y in adj[p[-1]]:
            if d[idx[v], y] == len(p) and d[y, target] == d[p[-1], target] - 1:
                paths.append(p + [y])
    return done and all(idx[w] in p for p in done)


@pytest.mark.parametrize("n,k", [(1, 2), (1, 3), (2, 2)])
def test_vplus_vminus_uniqueness_by_path_enumeration(n, k):
    g = build_graph(LAAKSO, n, k)
    for v in g.vertices:
        if v.level in (0, 1):
            continue
        vm, vp = laakso_vplus_vminus(g, v)
        assert vm.level < v.level < vp.level
        assert _all_geodesics_pass(g, v, vp)
        assert _all_geodesics_pass(g, v, vm)
        t = minimal_expansion(4, v.level).depth
        assert minimal_expansion(4, vp.level).depth < t


def test_json_and_dot_are_deterministic():
    a, b = build_graph(LAAKSO, 2, 2), build_graph(LAAKSO, 2, 2)
    assert a.dumps() == b.dumps()
    assert a.to_dot() == b.to_dot()
    obj = a.to_json()
    assert obj["unit"] == "1/16"
    assert [VertexLabel.from_json(x) for x in obj["vertices"]] == list(a.vertices)
    assert a.to_dot().startswith('graph "laakso_2_2"')


@settings(max_examples=50)
@given(st.fractions(min_value=0, max_value=1, max_denominator=64), st.lists(st.integers(1, 5), max_size=4))
def test_label_text_roundtrip(level, branch):
    v = VertexLabel(level, tuple(branch))
    assert VertexLabel.parse(str(v)) == v
