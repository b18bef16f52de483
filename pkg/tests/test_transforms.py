import math
from fractions import Fraction
from itertools import product

import pytest

from frozen import CORRECT_H2, CORRECT_S2, M4, M5, N4, N5, P4, PRINTED_H2, PRINTED_S2, S4
from treepoly.algebra import Poly, RationalMatrix, mat_det, partitions_of
from treepoly.invariants import csf_powersum, gdp, hdp, stp
from treepoly.transforms import (
    BridgeError,
    block_determinants,
    build_matrices,
    csf_gdp_check,
    degree_sequence,
    degree_sequence_from_csf,
    gdp_from_csf,
    hdp_from_stp,
    omega,
    omega_literal,
    stp_from_hdp,
    stp_vectors,
    verify_bridge,
)
from treepoly.trees import generate_free_trees


def _rows(m: RationalMatrix):
    r, c = m.shape
    return [[int(m[i, j]) for j in range(c)] for i in range(r)]


def test_omega_star_value():
    assert omega((4,), 0, 0, 0) == -1


@pytest.mark.parametrize("n", range(1, 8))
def test_omega_matches_literal_sum(n):
    for lam in partitions_of(n):
        for a, b, c in product(range(n + 1), range(n), range(n)):
            assert omega(lam, a, b, c) == omega_literal(lam, a, b, c)


def test_omega_rejects_non_partition():
    with pytest.raises(ValueError):
        omega((1, 2), 0, 0, 0)


def test_p4_gdp_coefficient_from_csf():
    csf = csf_powersum(P4)
    assert sum(c * omega(lam, 2, 1, 1) for lam, c in csf.coeffs.items()) == 2


@pytest.mark.parametrize("n", range(1, 8))
def test_csf_to_gdp_transform(n):
    for t in generate_free_trees(n):
        assert gdp_from_csf(csf_powersum(t)) == gdp(t)


@pytest.mark.parametrize("n", range(1, 9))
def test_degree_sequence(n):
    for t in generate_free_trees(n):
        assert degree_sequence_from_csf(csf_powersum(t)) == degree_sequence(t)


def test_matrices_n4_n5():
    m4, m5 = build_matrices(4), build_matrices(5)
    assert _rows(m4.M) == M4 and _rows(m4.N) == N4
    assert _rows(m5.M) == M5 and _rows(m5.N) == N5


def test_n_block_form_n5():
    mats = build_matrices(5)
    assert [_rows(b) for b in mats.n_blocks()] == [[[2]], [[1, 3], [2, 3]], [[0, 1, 4], [1, 3, 6], [2, 3, 4]]]
    assert [_rows(b) for b in mats.m_blocks()] == [[[1, 2, 3], [0, 1, 3], [0, 0, 1]], [[1, 2], [0, 1]], [[1]]]


def test_block_determinants():
    dets = block_determinants(12)
    assert {i: abs(d) for i, d in dets.items()} == {i: i for i in range(2, 13)}


def test_full_determinant_is_factorial():
    for n in range(3, 9):
        assert abs(mat_det(build_matrices(n).N)) == math.factorial(n - 1)


def test_example_vectors():
    m = build_matrices(4)
    for name, t in (("P4", P4), ("S4", S4)):
        vec = stp_vectors(t)
        assert vec.H2 == CORRECT_H2[name]
        assert vec.S2 == CORRECT_S2[name]
        assert m.M @ list(vec.H2) == m.N @ list(vec.S2)
    # the printed vectors of the worked example do not satisfy the printed matrices
    assert any(m.M @ list(PRINTED_H2[k]) != m.N @ list(PRINTED_S2[k]) for k in PRINTED_H2)


def test_p_identity_needs_the_edge_correction():
    r = verify_bridge(P4)
    assert r.pd_identity and not r.p_identity
    m = build_matrices(4)
    vec = stp_vectors(P4)
    ph = m.P @ list(vec.H1)
    assert ph[1] == 2 * vec.S1[1]


@pytest.mark.parametrize("n", range(1, 10))
def test_bridge_all_trees(n):
    for t in generate_free_trees(n):
        r = verify_bridge(t)
        assert r.ok, (t, r)


def test_conversions_on_examples():
    for t in (P4, S4):
        assert stp_from_hdp(hdp(t), 4) == stp(t)
        assert hdp_from_stp(stp(t), 4) == hdp(t)


def test_bridge_rejects_impossible_terms():
    with pytest.raises(BridgeError):
        stp_from_hdp(Poly(("y", "z"), {(5, 0): 1}), 4)


def test_csf_gdp_check_helper():
    assert csf_gdp_check(P4) and csf_gdp_check(S4)
