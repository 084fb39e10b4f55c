from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from esaembed.errors import DomainError, PreconditionError
from esaembed.signvec import (
    ESA,
    IS,
    L1,
    SA,
    SUMMING,
    SignVector,
    axiom_suite,
    check_axiom,
    l1_norm,
    list_norm,
    merge_at,
    shift,
    spread,
    summing_norm,
)

import oracles

coeffs = st.lists(st.integers(-3, 3), max_size=40)
rationals = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6), max_size=30)


def D(*xs):
    return SignVector.from_dense(list(xs))


def test_norm_examples():
    assert l1_norm(D(1, 1, -1, -1)) == 4
    assert summing_norm(D(1, 1, -1, -1)) == 2
    assert summing_norm(D(-1, 1, -1, 1)) == 1
    assert l1_norm(SignVector.zero()) == summing_norm(SignVector.zero()) == 0


def test_runs_are_canonical():
    v = SignVector(((1, 2, 1), (3, 2, 1), (7, 1, -1)))
    assert v.runs == ((1, 4, 1), (7, 1, -1))
    assert v.support_end == 7
    with pytest.raises(DomainError):
        SignVector(((3, 2, 1), (1, 1, 1)))
    with pytest.raises(DomainError):
        SignVector(((0, 1, 1),))


@given(coeffs)
def test_dense_roundtrip(a):
    v = SignVector.from_dense(a)
    assert v.to_dense(len(a)) == a
    for (s, l, val), (s2, _, val2) in zip(v.runs, v.runs[1:]):
        assert s + l < s2 or val != val2


@given(coeffs)
def test_norms_match_brute_force(a):
    v = SignVector.from_dense(a)
    assert l1_norm(v) == oracles.l1(a)
    assert summing_norm(v) == oracles.prefix_sup(a)
    assert summing_norm(v) <= l1_norm(v)


@given(rationals, rationals)
def test_arithmetic_matches_dense(a, b):
    n = max(len(a), len(b))
    a, b = a + [0] * (n - len(a)), b + [0] * (n - len(b))
    va, vb = SignVector.from_dense(a), SignVector.from_dense(b)
    assert (va + vb).to_dense(n) == [x + y for x, y in zip(a, b)]
    assert (va - vb).to_dense(n) == [x - y for x, y in zip(a, b)]
    assert (-va).to_dense(n) == [-x for x in a]
    assert va.scale(Fraction(1, 3)).to_dense(n) == [x / 3 for x in a]


@given(coeffs, st.integers(0, 20))
def test_shift_preserves_norms(a, t):
    v = SignVector.from_dense(a)
    w = shift(v, t)
    assert l1_norm(w) == l1_norm(v) and summing_norm(w) == summing_norm(v)
    assert w.to_dense(len(a) + t) == [0] * t + a


def test_shift_examples():
    v = D(1, 1, -1, -1)
    assert shift(v, 0) == v
    w = shift(v, 4)
    assert [i for i in range(1, 9) if w.coefficient(i)] == [5, 6, 7, 8]


def test_long_vectors_match_brute_force():
    a = [((i * 7919) % 5) - 2 for i in range(2**16)]
    v = SignVector.from_dense(a)
    assert summing_norm(v) == oracles.prefix_sup(a)


def test_json_and_tsv():
    v = SignVector(((1, 2, 1), (4, 1, Fraction(-1, 2))))
    assert v.to_json() == [{"start": 1, "len": 2, "val": "1"}, {"start": 4, "len": 1, "val": "-1/2"}]
    assert SignVector.from_json(v.to_json()) == v
    assert v.to_tsv() == "1\t1\t0\t-1/2\n"


def test_axiom_examples():
    r = check_axiom(L1, ESA, [1, 1, -1, -1], 1)
    assert r.passed and r.original == r.transformed == 4
    r = check_axiom(SUMMING, IS, [1, -1], (2, 5))
    assert r.passed and r.original == r.transformed == 1
    r = check_axiom(SUMMING, SA, [1, -1, 1, -1], 2)
    assert r.passed and (r.transformed, r.original) == (1, 1)
    with pytest.raises(PreconditionError):
        check_axiom(L1, ESA, [1, -1], 1)


def test_merge_and_spread():
    assert merge_at([1, 2, 3], 2) == [1, 5]
    assert spread([1, -1], (2, 5)) == [0, 1, 0, 0, -1]
    with pytest.raises(DomainError):
        spread([1, 2], (3, 3))


@given(coeffs, st.data())
def test_esa_and_sa_hold(a, data):
    if len(a) < 2:
        return
    k = data.draw(st.integers(1, len(a) - 1))
    for nk in (L1, SUMMING):
        assert check_axiom(nk, SA, a, k).passed
        if a[k - 1] * a[k] >= 0:
            assert check_axiom(nk, ESA, a, k).passed


@given(coeffs, st.data())
def test_is_holds(a, data):
    idx = sorted(data.draw(st.sets(st.integers(1, 4 * len(a) + 1), min_size=len(a), max_size=len(a))))
    for nk in (L1, SUMMING):
        assert list_norm(spread(a, idx), nk) == list_norm(a, nk)


def test_a_norm_that_is_not_esa_is_caught():
    # the sup norm is spreading invariant but not equal-signs additive
    a = [1, 1]
    merged = merge_at(a, 1)
    assert max(map(abs, merged)) != max(map(abs, a))


def test_small_axiom_suite():
    rep = axiom_suite(seed=7, count=50, spreadings=10)
    assert rep.passed
    assert all(v > 0 for v in rep.checks.values())
    assert rep.to_json()["seed"] == 7


@settings(max_examples=25)
@given(coeffs)
def test_zero_behaviour(a):
    v = SignVector.from_dense(a)
    assert (v - v).is_zero()
    assert v + SignVector.zero() == v
