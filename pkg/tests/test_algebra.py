from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treepoly.algebra import (
    Poly,
    RationalMatrix,
    SingularMatrixError,
    binom,
    block_diagonal,
    check_composition,
    coarsenings,
    compositions_of,
    mat_det,
    mat_inverse,
    mat_solve,
    multiset_binomial,
    partitions_of,
)

XYZ = ("x", "y", "z")
PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


def test_partition_counts():
    assert [len(partitions_of(n)) for n in range(13)] == PARTITION_COUNTS


def test_partitions_are_reverse_lex():
    assert partitions_of(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_binom_edges():
    assert binom(5, 2) == 10
    assert binom(3, 5) == 0
    assert binom(3, -1) == 0


def test_multiset_binomial():
    assert multiset_binomial((2, 1, 1), (1, 1)) == 1
    assert multiset_binomial((2, 1, 1), (1,)) == 2
    assert multiset_binomial((2, 2), (3,)) == 0


def test_compositions_and_coarsenings():
    assert len(list(compositions_of(6))) == 32
    cs = list(coarsenings((1, 2, 1)))
    assert cs[0] == (1, 2, 1)
    assert sorted(cs) == sorted([(1, 2, 1), (3, 1), (1, 3), (4,)])
    with pytest.raises(ValueError):
        check_composition((1, 0, 2))


@given(st.lists(st.integers(1, 4), min_size=1, max_size=9))
def test_coarsening_count(parts):
    cs = list(coarsenings(parts))
    assert len(cs) == 2 ** (len(parts) - 1) == len(set(cs))


def _rand_poly(draw_terms):
    return Poly(XYZ, {tuple(e): c for e, c in draw_terms})


term = st.tuples(st.tuples(*[st.integers(0, 3)] * 3), st.integers(-4, 4))
polys = st.lists(term, max_size=6).map(_rand_poly)


@settings(max_examples=60)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly(XYZ)
    assert (a * b).evaluate({"x": 2, "y": -1, "z": 3}) == a.evaluate({"x": 2, "y": -1, "z": 3}) * b.evaluate({"x": 2, "y": -1, "z": 3})


@settings(max_examples=40)
@given(polys, st.integers(0, 3))
def test_divide_by_sum_roundtrip(a, k):
    s = Poly.var(XYZ, "y") + Poly.var(XYZ, "z")
    assert (a * s ** k).divide_by_sum("y", "z", k) == a


def test_divide_by_sum_rejects_remainder():
    y = Poly.var(XYZ, "y")
    with pytest.raises(ArithmeticError):
        (y + 1).divide_by_sum("y", "z")


def test_text_and_json():
    q, r = Poly.var(("q", "r"), "q"), Poly.var(("q", "r"), "r")
    p = 4 + 3 * q * r + 2 * q ** 2 * r ** 2 + q ** 3 * r ** 2
    assert p.to_text() == "4 + 3*q*r + 2*q^2*r^2 + 1*q^3*r^2"
    assert Poly.from_json(p.to_json()) == p
    assert (1 - 3 * q).to_text() == "1 - 3*q"


def test_substitute():
    names = ("a", "b")
    a, b = Poly.var(names, "a"), Poly.var(names, "b")
    got = (a * b + a).substitute({"a": b + 1})
    assert got == (b + 1) * b + b + 1


def _leibniz(rows):
    n = len(rows)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = (-1) ** inv
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total


@settings(max_examples=50)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_leibniz(rows):
    assert mat_det(RationalMatrix(rows)) == _leibniz(rows)


@settings(max_examples=50)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_and_solve(rows):
    m = RationalMatrix(rows)
    if _leibniz(rows) == 0:
        with pytest.raises(SingularMatrixError):
            mat_inverse(m)
        return
    inv = mat_inverse(m)
    assert m @ inv == RationalMatrix.identity(len(rows))
    v = list(range(1, len(rows) + 1))
    x = mat_solve(m, v)
    assert m @ x == [Fraction(t) for t in v]


def test_block_diagonal():
    b = block_diagonal([RationalMatrix([[2]]), RationalMatrix([[1, 1], [0, 3]])])
    assert b.shape == (3, 3)
    assert mat_det(b) == 6
