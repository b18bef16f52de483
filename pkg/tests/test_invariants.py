import random

import pytest

from frozen import CSF_MONO, CSF_PSUM, GDP, HDP, P4, S4, SOUP, STP, STP_TEXT_P4
from treepoly.algebra import Poly
from treepoly.invariants import (
    HDP_VARS,
    csf_monomial,
    csf_powersum,
    csf_powersum_brute,
    gdp,
    gdp_brute,
    gdp_cat,
    hdp,
    hdp_brute,
    hdp_cat,
    hdp_from_gdp,
    hdp_from_soup,
    leaf_count_from_csf,
    powersum_to_monomial,
    recurrence_rhs,
    recurrence_sides,
    soup,
    soup_brute,
    stp,
    stp_brute,
    stp_from_soup,
    subtree_count,
    uhdp,
)
from treepoly.trees import Tree, cat, generate_free_trees, is_isomorphic, near_contract, non_leaf_edges

TREES = {"P4": P4, "S4": S4}


@pytest.mark.parametrize("name", ["P4", "S4"])
def test_worked_examples(name):
    t = TREES[name]
    assert csf_powersum(t).coeffs == CSF_PSUM[name]
    assert csf_monomial(t) == CSF_MONO[name]
    assert powersum_to_monomial(csf_powersum(t)) == CSF_MONO[name]
    assert gdp(t) == GDP[name]
    assert hdp(t) == HDP[name]
    assert stp(t) == STP[name]
    assert soup(t) == SOUP[name]


def test_stp_text():
    assert stp(P4).to_text() == STP_TEXT_P4


def test_uhdp_of_p4():
    y = Poly.var(HDP_VARS, "y")
    assert uhdp(P4) == HDP["P4"] - 2 * y


def test_small_trees():
    point = Tree(1, [])
    assert csf_powersum(point).coeffs == {(1,): 1}
    assert gdp(point).to_text() == "1 + 1*x"
    assert hdp(point).to_text() == "1"
    assert stp(point).to_text() == "1"
    assert soup(point).to_text() == "1"


@pytest.mark.parametrize("n", range(1, 10))
def test_engines_match_oracles(n):
    for t in generate_free_trees(n):
        assert csf_powersum(t) == csf_powersum_brute(t)
        assert gdp(t) == gdp_brute(t)
        assert hdp(t) == hdp_brute(t)
        assert stp(t) == stp_brute(t)
        assert soup(t) == soup_brute(t)


@pytest.mark.parametrize("n", range(2, 10))
def test_evaluations_and_specializations(n):
    for t in generate_free_trees(n):
        g, h, s, u = gdp(t), hdp(t), stp(t), soup(t)
        assert g.evaluate({"x": 1, "y": 1, "z": 1}) == 2 ** n
        count = subtree_count(t)
        assert h.evaluate({"y": 1, "z": 1}) == s.evaluate({"q": 1, "r": 1}) == u.evaluate({"x": 1, "y": 1, "z": 1}) == count
        assert hdp_from_gdp(g) == h
        assert hdp_from_soup(u) == h
        assert stp_from_soup(u) == s
        assert leaf_count_from_csf(csf_powersum(t)) == t.leaf_count()


def test_monomial_basis_up_to_seven():
    for n in range(1, 8):
        for t in generate_free_trees(n):
            assert powersum_to_monomial(csf_powersum(t)) == csf_monomial(t)


@pytest.mark.parametrize("n", range(3, 9))
def test_near_contraction_recurrence(n):
    for t in generate_free_trees(n):
        for v, w in non_leaf_edges(t):
            for e in ((v, w), (w, v)):
                lhs, rhs = recurrence_sides(t, e)
                assert lhs == rhs


def test_recurrence_two_caterpillars():
    # two caterpillars whose recurrence right-hand sides coincide
    left = cat((2, 2, 1, 3, 3))
    right = cat((2, 3, 2, 1, 3))
    assert recurrence_rhs(left, (1, 2)) == recurrence_rhs(right, (2, 3))
    assert hdp(left) == hdp(right)
    assert is_isomorphic(near_contract(left, (1, 2)), near_contract(right, (2, 3)))


def test_closed_forms_examples():
    assert gdp_cat((4,)) == gdp(S4)
    assert hdp_cat((2, 2)) == hdp(P4)
    assert hdp_cat((2, 2, 1, 3, 3)) == hdp(cat((2, 2, 1, 3, 3)))


def test_closed_forms_random():
    rng = random.Random(20240611)
    for _ in range(200):
        m = rng.randint(1, 16)
        cuts = sorted(rng.sample(range(1, m), rng.randint(0, min(m - 1, 7)))) if m > 1 else []
        parts = [b - a for a, b in zip([0] + cuts, cuts + [m])]
        if len(parts) >= 2 and (parts[0] < 2 or parts[-1] < 2):
            continue
        t = cat(parts)
        assert gdp_cat(parts) == gdp(t)
        assert hdp_cat(parts) == hdp(t)


def test_closed_form_rejects_bad_signature():
    with pytest.raises(ValueError):
        hdp_cat((1, 2, 2))
