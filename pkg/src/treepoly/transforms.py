"""Linear maps between tree invariants.

* power-sum CSF coefficients -> GDP coefficients (the ω kernel);
* power-sum CSF coefficients -> degree sequence;
* HDP <-> STP through the matrices P, M, N acting on coefficient vectors.

All arithmetic is exact (ints and Fractions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .algebra import (
    Partition,
    Poly,
    RationalMatrix,
    binom,
    block_diagonal,
    mat_det,
    mat_inverse,
    multiset_binomial,
    partitions_of,
)
from .invariants import GDP_VARS, HDP_VARS, STP_VARS, PsumCsf, csf_powersum, gdp, hdp, stp
from .trees import Tree


# ---------------------------------------------------------------------------
# CSF -> GDP
# ---------------------------------------------------------------------------

def omega(lam: Partition, a: int, b: int, c: int) -> int:
    """(-1)^(n-b-1) Σ_{μ ⊢ a} C(a-ℓ(μ), c) C(λ; μ) C(n-ℓ(λ)+ℓ(μ)-a, n-b-c-1)."""
    lam = tuple(lam)
    if any(p < 1 for p in lam) or list(lam) != sorted(lam, reverse=True):
        raise ValueError(f"not a partition: {lam!r}")
    n = sum(lam)
    if a < 0 or b < 0 or c < 0:
        return 0
    total = 0
    for mu in partitions_of(a):
        mb = multiset_binomial(lam, mu)
        if not mb:
            continue
        total += binom(a - len(mu), c) * mb * binom(n - len(lam) + len(mu) - a, n - b - c - 1)
    return -total if (n - b - 1) & 1 else total


def omega_literal(lam: Partition, a: int, b: int, c: int) -> int:
    """Same value as :func:`omega`, summing over sub-multisets of the parts
    of λ (index subsets) instead of over partitions μ of a."""
    lam = tuple(lam)
    n = sum(lam)
    total = 0
    for r in range(len(lam) + 1):
        for idx in combinations(range(len(lam)), r):
            if sum(lam[i] for i in idx) != a:
                continue
            total += binom(a - r, c) * binom(n - len(lam) + r - a, n - b - c - 1)
    return (-1) ** ((n - b - 1) & 1) * total


def _gdp_support(n: int) -> list[tuple[int, int, int]]:
    """Every (a, b, c) that can carry a nonzero GDP coefficient."""
    keys = [(0, 0, 0), (n, 0, n - 1)]
    for a in range(1, n):
        for c in range(a):
            for b in range(1, n - c):
                keys.append((a, b, c))
    return keys


@lru_cache(maxsize=32)
def _omega_table(n: int) -> tuple[tuple[Partition, ...], tuple[tuple[tuple[int, int, int], tuple[int, ...]], ...]]:
    # read-only once built; deterministic per n
    parts = tuple(partitions_of(n))
    rows = []
    for key in _gdp_support(n):
        row = tuple(omega(lam, *key) for lam in parts)
        if any(row):
            rows.append((key, row))
    return parts, tuple(rows)


def gdp_from_csf(csf: PsumCsf) -> Poly:
    """g(a, b, c) = Σ_λ c_λ ω(λ, a, b, c)."""
    parts, rows = _omega_table(csf.n)
    vec = [csf[lam] for lam in parts]
    terms = {}
    for key, row in rows:
        v = sum(w * c for w, c in zip(row, vec) if c)
        if v:
            terms[key] = v
    return Poly(GDP_VARS, terms)


def degree_sequence_from_csf(csf: PsumCsf) -> list[int]:
    """Entry b is the number of vertices of degree b, b = 0..n-1."""
    n = csf.n
    out = []
    for b in range(n):
        total = 0
        for lam, c in csf.coeffs.items():
            m1 = sum(1 for p in lam if p == 1)
            total += c * m1 * binom(n - len(lam), n - b - 1)
        out.append(total if (n - b - 1) % 2 == 0 else -total)
    return out


def degree_sequence(t: Tree) -> list[int]:
    counts = [0] * t.n
    for d in t.degrees():
        counts[d] += 1
    return counts


# ---------------------------------------------------------------------------
# HDP <-> STP
# ---------------------------------------------------------------------------

class BridgeError(ValueError):
    """Polynomial has a coefficient outside the range a tree can produce."""


def h2_index(n: int) -> list[tuple[int, int]]:
    """(a, b) with a = e(S) >= 1, b = d(S) >= 1, a + b <= n - 1, sorted by a then b."""
    return [(a, b) for a in range(1, n - 1) for b in range(1, n - a)]


def s2_index(n: int) -> list[tuple[int, int]]:
    """(i, j) with 2 <= j <= i <= n - 1, sorted by i then j."""
    return [(i, j) for i in range(2, n) for j in range(2, i + 1)]


def m_rows(n: int) -> list[tuple[int, int]]:
    """Equation labels (a, k), a, k >= 1, a + k <= n - 1, sorted by a then k."""
    return [(a, k) for a in range(1, n - 1) for k in range(1, n - a)]


def n_rows(n: int) -> list[tuple[int, int]]:
    """The same equations sorted by a + k then a."""
    return sorted(m_rows(n), key=lambda ak: (ak[0] + ak[1], ak[0]))


@dataclass(frozen=True)
class BridgeVectors:
    n: int
    H1: tuple[int, ...]
    H2: tuple[int, ...]
    S1: tuple[int, ...]
    S2: tuple[int, ...]


@dataclass(frozen=True)
class BridgeMatrices:
    n: int
    P: RationalMatrix
    M: RationalMatrix
    N: RationalMatrix
    rows: tuple[tuple[int, int], ...]        # equation label of each row of M and N
    h2_cols: tuple[tuple[int, int], ...]
    s2_cols: tuple[tuple[int, int], ...]
    n_block_rows: tuple[tuple[int, int], ...]  # row order exposing N's blocks
    D: RationalMatrix  # P H1 = D S1; D = diag(1, 2, 1, ..., 1)

    def n_blocks(self) -> list[RationalMatrix]:
        """Diagonal blocks N_i (i = a + k = 2..n-1) after reordering rows by
        (a + k, a); block i is square of size i - 1."""
        out = []
        for i in range(2, self.n):
            rows = [self.rows.index(ak) for ak in self.n_block_rows if sum(ak) == i]
            cols = [j for j, (ii, _) in enumerate(self.s2_cols) if ii == i]
            out.append(self.N.submatrix(rows, cols))
        return out

    def m_blocks(self) -> list[RationalMatrix]:
        """Diagonal blocks M_a, a = 1..n-2."""
        out = []
        for a in range(1, self.n - 1):
            rows = [r for r, (aa, _) in enumerate(self.rows) if aa == a]
            cols = [j for j, (aa, _) in enumerate(self.h2_cols) if aa == a]
            out.append(self.M.submatrix(rows, cols))
        return out

    def n_reordered(self) -> RationalMatrix:
        return block_diagonal(self.n_blocks())


def _hdp_coeff(h: Poly, a: int, b: int) -> int:
    # HDP monomials are y^d z^e; h(a, b) has a = e, b = d
    return h.coefficient((b, a))


def extract_vectors(h: Poly, s: Poly, n: int) -> BridgeVectors:
    if h.vars != HDP_VARS or s.vars != STP_VARS:
        raise BridgeError("expected an HDP in (y, z) and an STP in (q, r)")
    _check_hdp_support(h, n)
    _check_stp_support(s, n)
    H1 = tuple(_hdp_coeff(h, 0, b) for b in range(n))
    H2 = tuple(_hdp_coeff(h, a, b) for a, b in h2_index(n))
    S1 = tuple(s.coefficient((k, k)) for k in range(n))
    S2 = tuple(s.coefficient(ij) for ij in s2_index(n))
    return BridgeVectors(n, H1, H2, S1, S2)


def _check_hdp_support(h: Poly, n: int) -> None:
    for (d, e) in h.terms:
        a, b = e, d
        legal = (a == 0 and b < n) or (a >= 1 and b >= 1 and a + b <= n - 1) or (a == n - 1 and b == 0)
        if not legal:
            raise BridgeError(f"HDP term y^{d} z^{e} impossible for n={n}")


def _check_stp_support(s: Poly, n: int) -> None:
    for (i, j) in s.terms:
        legal = (i == j and i < n) or (2 <= j <= i <= n - 1)
        if not legal:
            raise BridgeError(f"STP term q^{i} r^{j} impossible for n={n}")


@lru_cache(maxsize=32)
def build_matrices(n: int) -> BridgeMatrices:
    """Matrices of the identities Σ_b C(b,k) h(a,b) = Σ_j C(j,k) s(a+k,j)."""
    P = RationalMatrix([[binom(j, i) for j in range(n)] for i in range(n)])
    rows = m_rows(n)
    hcols = h2_index(n)
    scols = s2_index(n)
    M = RationalMatrix([[binom(b, k) if aa == a else 0 for (aa, b) in hcols] for (a, k) in rows])
    N = RationalMatrix([[binom(j, k) if i == a + k else 0 for (i, j) in scols] for (a, k) in rows])
    # row k = 1 of P counts (vertex, incident edge) pairs, i.e. every
    # single-edge subtree once from each end
    D = RationalMatrix([[(2 if i == 1 else 1) if i == j else 0 for j in range(n)] for i in range(n)])
    return BridgeMatrices(n, P, M, N, tuple(rows), tuple(hcols), tuple(scols), tuple(n_rows(n)), D)


@dataclass
class BridgeReport:
    n: int
    p_identity: bool      # P H1 == S1 taken literally
    pd_identity: bool     # P H1 == D S1
    mn_identity: bool
    stp_roundtrip: bool
    hdp_roundtrip: bool

    @property
    def ok(self) -> bool:
        """Everything that must hold for a tree (the literal P H1 == S1 fails
        for every n >= 2 and is reported separately)."""
        return self.pd_identity and self.mn_identity and self.stp_roundtrip and self.hdp_roundtrip


def verify_bridge(t: Tree) -> BridgeReport:
    n = t.n
    h, s = hdp(t), stp(t)
    vec = extract_vectors(h, s, n)
    mats = build_matrices(n)
    ph = mats.P @ vec.H1
    mn_ok = mats.M @ vec.H2 == mats.N @ vec.S2
    return BridgeReport(
        n=n,
        p_identity=ph == [Fraction(x) for x in vec.S1],
        pd_identity=ph == mats.D @ vec.S1,
        mn_identity=mn_ok,
        stp_roundtrip=stp_from_hdp(h, n) == s,
        hdp_roundtrip=hdp_from_stp(s, n) == h,
    )


def _as_ints(values, what: str) -> list[int]:
    out = []
    for v in values:
        if v.denominator != 1:
            raise BridgeError(f"{what} has a non-integer coefficient {v}")
        out.append(int(v))
    return out


@lru_cache(maxsize=32)
def _inverses(n: int) -> tuple[RationalMatrix, RationalMatrix, RationalMatrix, RationalMatrix]:
    mats = build_matrices(n)
    p_inv, d_inv = mat_inverse(mats.P), mat_inverse(mats.D)
    if n < 3:
        empty = RationalMatrix([])
        return p_inv, d_inv, empty, empty
    return p_inv, d_inv, mat_inverse(mats.M), mat_inverse(mats.N)


def stp_from_hdp(h: Poly, n: int) -> Poly:
    """S1 = D^-1 P H1 and S2 = N^-1 M H2."""
    _check_hdp_support(h, n)
    mats = build_matrices(n)
    H1 = [_hdp_coeff(h, 0, b) for b in range(n)]
    H2 = [_hdp_coeff(h, a, b) for a, b in h2_index(n)]
    _, d_inv, _, n_inv = _inverses(n)
    S1 = _as_ints(d_inv @ (mats.P @ H1), "STP")
    terms = {(k, k): v for k, v in enumerate(S1)}
    if H2:
        S2 = _as_ints(n_inv @ (mats.M @ H2), "STP")
        terms.update({ij: v for ij, v in zip(s2_index(n), S2)})
    return Poly(STP_VARS, terms)


def hdp_from_stp(s: Poly, n: int) -> Poly:
    """H1 = P^-1 D S1 and H2 = M^-1 N S2, plus the whole-tree term z^(n-1)."""
    _check_stp_support(s, n)
    mats = build_matrices(n)
    p_inv, _, m_inv, _ = _inverses(n)
    S1 = [s.coefficient((k, k)) for k in range(n)]
    S2 = [s.coefficient(ij) for ij in s2_index(n)]
    H1 = _as_ints(p_inv @ (mats.D @ S1), "HDP")
    terms: dict = {}
    for b, v in enumerate(H1):
        terms[(b, 0)] = terms.get((b, 0), 0) + v
    if S2:
        H2 = _as_ints(m_inv @ (mats.N @ S2), "HDP")
        for (a, b), v in zip(h2_index(n), H2):
            terms[(b, a)] = v
    if n > 1:
        terms[(0, n - 1)] = 1
    return Poly(HDP_VARS, terms)


def block_determinants(max_i: int) -> dict[int, Fraction]:
    """det N_i for i = 2..max_i, read off the matrices for n = max_i + 1."""
    mats = build_matrices(max_i + 1)
    return {i: mat_det(b) for i, b in zip(range(2, max_i + 1), mats.n_blocks())}


def csf_gdp_check(t: Tree) -> bool:
    """gdp_from_csf(csf_powersum(T)) == gdp(T)."""
    return gdp_from_csf(csf_powersum(t)) == gdp(t)


def stp_vectors(t: Tree) -> BridgeVectors:
    return extract_vectors(hdp(t), stp(t), t.n)
