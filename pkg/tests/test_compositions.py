import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treepoly.algebra import Poly, coarsenings, compositions_of
from treepoly.compositions import (
    FactorizationError,
    HbarPoly,
    caterpillar_of,
    caterpillar_signature,
    compose,
    compose_all,
    concat,
    gap_free_pair,
    gap_free_factors,
    gap_free_signatures,
    hbar,
    hbar_from_lpoly,
    hbar_recurrence_check,
    hbar_specialize,
    hbar_vars,
    irreducible_factorization,
    is_gap_free,
    lpoly,
    near_concat,
    non_palindromic_factor_count,
    reverse,
    switching_class,
    hdp_family,
    uhdp_recurrence_check,
)
from treepoly.invariants import HDP_VARS, hdp, stp, uhdp
from treepoly.search import builtin_exhibits
from treepoly.trees import PolarizedTree, canonical_code, cat, is_isomorphic, polarized_path, polarized_point

comps = st.lists(st.integers(1, 4), min_size=1, max_size=5).map(tuple)


def test_example_compositions():
    assert compose((1, 2), (1, 2)) == (1, 2, 1, 3, 2)
    assert compose((2, 1), (1, 2)) == (1, 3, 2, 1, 2)
    assert near_concat((1, 2), (3, 1)) == (1, 5, 1)
    assert concat((1,), (2,)) == (1, 2)
    assert reverse((1, 2, 3)) == (3, 2, 1)


@settings(max_examples=500, deadline=None)
@given(comps, comps, comps)
def test_composition_identities(a, g, b):
    assert compose(concat(a, g), b) == concat(compose(a, b), compose(g, b))
    assert compose(near_concat(a, g), b) == near_concat(compose(a, b), compose(g, b))
    assert reverse(compose(a, b)) == compose(reverse(a), reverse(b))


def test_hbar_single_part():
    h = hbar((3,))
    assert h.denom_exp == 0
    assert h.cleared == Poly.var(hbar_vars(3), "x3")


def test_hbar_example():
    assert hbar((1, 2, 1, 3, 2)) == hbar((1, 3, 2, 1, 2))
    assert hbar((1, 2, 1, 3, 2)) != hbar((1, 2, 1, 2, 3))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=8).map(tuple))
def test_hbar_reversal(a):
    assert hbar(a) == hbar(a[::-1])


def test_hbar_cap():
    with pytest.raises(ValueError):
        hbar((1,) * 21)


def test_hbar_is_not_hashable():
    with pytest.raises(TypeError):
        hash(hbar((1, 2)))


def test_coarsening_binomial_identity():
    for k in range(1, 13):
        names = ("y", "z")
        y, z = Poly.var(names, "y"), Poly.var(names, "z")
        total = Poly(names)
        for g in coarsenings((1,) * k):
            total = total + y ** (len(g) - 1) * z ** (k - len(g))
        assert total == (y + z) ** (k - 1)


def test_specialize_star():
    y, z = Poly.var(HDP_VARS, "y"), Poly.var(HDP_VARS, "z")
    for a in range(1, 8):
        assert hbar_specialize((a,)) == (y + z) ** (a + 1)
        assert hbar_specialize((a,)) == uhdp(cat((a + 2,)))


def test_specialize_example():
    assert caterpillar_signature((1, 2, 1, 3, 2)) == (2, 2, 1, 3, 3)
    assert hbar_specialize((1, 2, 1, 3, 2)) == uhdp(cat((2, 2, 1, 3, 3)))


@pytest.mark.parametrize("m", range(1, 11))
def test_specialize_all(m):
    y = Poly.var(HDP_VARS, "y")
    for a in compositions_of(m):
        t = caterpillar_of(a)
        assert hbar_specialize(a) == uhdp(t)
        assert hbar_specialize(a) + y * t.leaf_count() == hdp(t)


def test_recurrence_small():
    assert hbar_recurrence_check((1,), (2,))


def test_recurrence_random_pairs():
    rng = random.Random(7)
    for _ in range(500):
        la = rng.randint(1, 7)
        lb = rng.randint(1, 14 - la)
        a = tuple(rng.randint(1, 3) for _ in range(la))
        b = tuple(rng.randint(1, 3) for _ in range(lb))
        assert hbar_recurrence_check(a, b)


def test_uhdp_recurrence_random_pairs():
    rng = random.Random(8)
    for _ in range(60):
        a = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 4)))
        b = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 4)))
        assert uhdp_recurrence_check(a, b)


def test_factorization_examples():
    assert irreducible_factorization((1, 2, 1, 3, 2)).factors == ((1, 2), (1, 2))
    assert irreducible_factorization((1, 3, 2, 1, 2)).factors == ((2, 1), (1, 2))
    assert irreducible_factorization((2,)).factors == ((2,),)


@pytest.mark.parametrize("m", range(1, 13))
def test_factorization_roundtrip_and_switches(m):
    for a in compositions_of(m):
        fac = irreducible_factorization(a)
        assert compose_all(fac.factors) == a
        cls = switching_class(a)
        assert a in cls
        h = hbar(a)
        ref = hdp(caterpillar_of(a))
        for b in cls:
            assert hbar(b) == h
            assert hdp(caterpillar_of(b)) == ref
            other = irreducible_factorization(b).factors
            assert all(f in (g, g[::-1]) for f, g in zip(other, fac.factors))


def test_stp_constant_on_switching_class():
    for a in [(1, 2, 1, 3, 2), (2, 1, 1, 2, 1, 1, 2), (1, 1, 2, 1, 1, 3)]:
        values = {stp(caterpillar_of(b)).to_text() for b in switching_class(a)}
        assert len(values) == 1


def test_switching_class_example():
    raw = switching_class((1, 2, 1, 3, 2))
    assert len(raw) == 4
    assert {(1, 2, 1, 3, 2), (1, 3, 2, 1, 2), (2, 1, 2, 3, 1)} <= set(raw)
    assert len(switching_class((1, 2, 1, 3, 2), up_to_reversal=True)) == 2


def test_switching_lower_bound():
    for m in range(1, 12):
        for a in compositions_of(m):
            q = non_palindromic_factor_count(a)
            if q:
                assert len(switching_class(a, up_to_reversal=True)) >= 2 ** (q - 1)


def test_palindrome_is_alone():
    assert switching_class((1, 2, 1)) == [(1, 2, 1)]


def test_gap_free_pair_example():
    s1, s2 = gap_free_signatures((1, 1, 0, 1), 1, 2)
    assert s1 == (2, 3, 2, 1, 3) and s2 == (3, 3, 1, 2, 2)
    t1, t2 = gap_free_pair((1, 1, 0, 1), 1, 2)
    fig = next(e for e in builtin_exhibits() if e.name == "caterpillars11")
    assert {canonical_code(t1), canonical_code(t2)} == {canonical_code(fig.first), canonical_code(fig.second)}
    beta, alpha = gap_free_factors((1, 1, 0, 1), 1, 2)
    assert caterpillar_signature(compose(beta, alpha)) == s1
    assert stp(t1) == stp(t2)


def test_gap_free_pair_constant_polynomial():
    # p = 1 gives Cat(a+1, b+1) and its reversal: one double star
    for a in range(1, 4):
        for b in range(1, 4):
            t1, t2 = gap_free_pair((1,), a, b)
            assert t1.n == t2.n == a + b + 2
            assert is_isomorphic(t1, t2)


def test_gap_free_pair_pairs_share_stp():
    for p in [(1, 1), (1, 0, 1), (1, 1, 0, 1), (1, 0, 1, 1, 0, 1)]:
        for a, b in [(1, 2), (2, 3), (1, 3)]:
            t1, t2 = gap_free_pair(p, a, b)
            assert stp(t1) == stp(t2)


def test_gap_free_pair_rejects():
    assert not is_gap_free((1, 0, 0, 1))
    with pytest.raises(ValueError):
        gap_free_pair((1, 0, 0, 1), 1, 2)
    with pytest.raises(ValueError):
        gap_free_pair((1, 1), 0, 2)


def test_lpoly():
    x1, x2, x3 = (Poly.var(("x1", "x2", "x3"), f"x{i}") for i in (1, 2, 3))
    assert lpoly((1, 2)) == x1 * x2 + x3
    assert lpoly((1, 2, 3)) == lpoly((3, 2, 1))


@pytest.mark.parametrize("k", range(1, 11))
def test_lpoly_roundtrip(k):
    rng = random.Random(k)
    for _ in range(20):
        a = tuple(rng.randint(1, 3) for _ in range(k))
        assert hbar_from_lpoly(lpoly(a)) == hbar(a)


def test_family_with_point_is_caterpillar_exhibit():
    trees = hdp_family((1, 2, 1, 3, 2), polarized_point())
    fig = next(e for e in builtin_exhibits() if e.name == "caterpillars11")
    assert len(trees) == 2
    assert {canonical_code(t) for t in trees} == {canonical_code(fig.first), canonical_code(fig.second)}


def test_family_on_polarized_tree():
    from test_trees import drawn_polarized_tree

    trees = hdp_family((1, 2), drawn_polarized_tree())
    assert len(trees) == 2
    assert hdp(trees[0]) == hdp(trees[1])


def test_family_palindrome_and_cap():
    assert len(hdp_family((2, 1, 2), polarized_path(3))) == 1
    with pytest.raises(ValueError):
        hdp_family((1, 2, 1, 3, 2), polarized_path(20))


def test_family_general_identity():
    # Ū(1 ⊙ (α∘T) ⊙ 1) = H̄(α) at x_i = Ū(1 ⊙ T^{⊙i} ⊙ 1)
    from treepoly.trees import cap, compose_tree, odot_power

    a = PolarizedTree(cat((2, 3)), 0, 1)
    alpha = (1, 2, 2)
    h = hbar(alpha)
    y, z = Poly.var(HDP_VARS, "y"), Poly.var(HDP_VARS, "z")
    mapping = {"y": y, "z": z}
    for i in range(1, sum(alpha) + 1):
        mapping[f"x{i}"] = uhdp(cap(odot_power(a, i)))
    lhs = uhdp(cap(compose_tree(alpha, a)))
    rhs = h.cleared.substitute(mapping, HDP_VARS).divide_by_sum("y", "z", h.denom_exp)
    assert lhs == rhs
