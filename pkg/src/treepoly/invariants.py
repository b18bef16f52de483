"""Tree invariants: power-sum coefficients of the chromatic symmetric
function, generalized and half-generalized degree polynomials, subtree
polynomial and the souped-up subtree polynomial.

Every invariant has a dynamic-programming engine (``csf_powersum``, ``gdp``,
``hdp``, ``stp``, ``soup``) and a brute-force oracle (``*_brute``) that
enumerates edge or vertex subsets directly.  The oracles are exponential and
intended for n <= ~20.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Partition, Poly, Terms, check_composition, partitions_of, terms_add, terms_mul
from .trees import Tree, cat, edge_split, near_contract, non_leaf_edges

GDP_VARS = ("x", "y", "z")
HDP_VARS = ("y", "z")
STP_VARS = ("q", "r")
SOUP_VARS = ("x", "y", "z")

BRUTE_MAX_N = 22


@dataclass(frozen=True, eq=True)
class PsumCsf:
    """Power-sum expansion ``X_T = sum c_λ p_λ`` of a tree's chromatic
    symmetric function.  Zero coefficients are not stored."""

    n: int
    coeffs: dict = field(hash=False)

    def __getitem__(self, lam: Sequence[int]) -> int:
        return self.coeffs.get(tuple(lam), 0)

    def sorted_items(self) -> list[tuple[Partition, int]]:
        # reverse lexicographic on partitions, matching partitions_of
        return sorted(self.coeffs.items(), reverse=True)

    def to_text(self) -> str:
        pieces = []
        for lam, c in sorted(self.coeffs.items()):
            body = f"{abs(c)}*p[{','.join(map(str, lam))}]"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(("+ " if c > 0 else "- ") + body)
        return " ".join(pieces) if pieces else "0"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"coeff": c, "partition": list(lam)} for lam, c in sorted(self.coeffs.items())],
        }


def _rooted(t: Tree, root: int = 0) -> tuple[list[int], list[int], list[list[int]]]:
    parent = [-1] * t.n
    parent[root] = root
    order = [root]
    for v in order:
        for w in t.adj[v]:
            if parent[w] == -1:
                parent[w] = v
                order.append(w)
    parent[root] = -1
    children: list[list[int]] = [[] for _ in range(t.n)]
    for v in order[1:]:
        children[parent[v]].append(v)
    return order, parent, children


# ---------------------------------------------------------------------------
# chromatic symmetric function
# ---------------------------------------------------------------------------

def _merge_sorted(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


def csf_powersum(t: Tree) -> PsumCsf:
    """c_λ(T) = (-1)^(n-ℓ(λ)) · #{F ⊆ E : type(F) = λ}.

    Rooted DP: a state is (size of the component currently containing the
    vertex, partition of components already closed below it)."""
    order, _, children = _rooted(t)
    states: list[dict | None] = [None] * t.n
    for v in reversed(order):
        cur: dict[tuple[int, tuple], int] = {(1, ()): 1}
        for c in children[v]:
            child = states[c]
            nxt: dict[tuple[int, tuple], int] = {}
            for (s1, p1), k1 in cur.items():
                for (s2, p2), k2 in child.items():
                    k = k1 * k2
                    # edge v-c not in F: child's component closes
                    key = (s1, _merge_sorted(p1, _merge_sorted(p2, (s2,))))
                    nxt[key] = nxt.get(key, 0) + k
                    # edge v-c in F: components merge
                    key = (s1 + s2, _merge_sorted(p1, p2))
                    nxt[key] = nxt.get(key, 0) + k
            states[c] = None
            cur = nxt
        states[v] = cur
    out: dict[Partition, int] = {}
    for (s, p), k in states[order[0]].items():
        lam = _merge_sorted(p, (s,))
        out[lam] = out.get(lam, 0) + k
    n = t.n
    return PsumCsf(n, {lam: (-1) ** ((n - len(lam)) & 1) * k for lam, k in out.items()})


def csf_powersum_brute(t: Tree) -> PsumCsf:
    """Oracle: enumerate all 2^(n-1) edge subsets."""
    n, edges = t.n, t.edges
    if n > BRUTE_MAX_N:
        raise ValueError(f"brute-force oracle limited to n <= {BRUTE_MAX_N}")
    counts: Counter = Counter()
    m = len(edges)
    for mask in range(1 << m):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(m):
            if mask >> i & 1:
                u, v = edges[i]
                parent[find(u)] = find(v)
        sizes = Counter(find(v) for v in range(n))
        counts[tuple(sorted(sizes.values(), reverse=True))] += 1
    return PsumCsf(n, {lam: (-1) ** ((n - len(lam)) & 1) * k for lam, k in counts.items()})


CSF_MONOMIAL_MAX_N = 12


def csf_monomial(t: Tree) -> dict[Partition, int]:
    """Coefficients of X_T in the monomial basis: the number of proper
    colorings using colour i exactly λ_i times, for colours 1..ℓ(λ)."""
    n = t.n
    if n > CSF_MONOMIAL_MAX_N:
        raise ValueError(f"monomial expansion is enumerative; n must be <= {CSF_MONOMIAL_MAX_N}")
    nbr = [sum(1 << w for w in t.adj[v]) for v in range(n)]
    independent_by_size: dict[int, list[int]] = {}
    for mask in range(1, 1 << n):
        ok = True
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            if nbr[v] & mask:
                ok = False
                break
            m ^= low
        if ok:
            independent_by_size.setdefault(mask.bit_count(), []).append(mask)

    out: dict[Partition, int] = {}
    full = (1 << n) - 1
    for lam in partitions_of(n):
        memo: dict[tuple[int, int], int] = {}

        def count(i: int, remaining: int) -> int:
            if i == len(lam):
                return 1 if remaining == 0 else 0
            key = (i, remaining)
            if key in memo:
                return memo[key]
            total = 0
            for s in independent_by_size.get(lam[i], ()):
                if s & remaining == s:
                    total += count(i + 1, remaining ^ s)
            memo[key] = total
            return total

        k = count(0, full)
        if k:
            out[lam] = k
    return out


def powersum_to_monomial(csf: PsumCsf) -> dict[Partition, int]:
    """Change of basis p -> m: the coefficient of m_μ in p_λ counts maps from
    the parts of λ onto the parts of μ whose fibres sum to the parts of μ."""
    out: dict[Partition, int] = {}
    for mu in partitions_of(csf.n):
        total = 0
        for lam, c in csf.coeffs.items():
            total += c * _fill_count(lam, mu)
        if total:
            out[mu] = total
    return out


def _fill_count(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Number of functions f from positions of λ to positions of μ with
    sum_{f(i)=j} λ_i = μ_j for every j."""
    def rec(i: int, room: tuple[int, ...]) -> int:
        if i == len(lam):
            return 1 if not any(room) else 0
        total = 0
        for j, r in enumerate(room):
            if r >= lam[i]:
                total += rec(i + 1, room[:j] + (r - lam[i],) + room[j + 1:])
        return total

    return rec(0, tuple(mu))


def leaf_count_from_csf(csf: PsumCsf) -> int:
    """|c_{(n-1,1)}|.  For n <= 2 the partition (n-1, 1) does not single out
    leaf edges, so the values 0 and 2 are returned directly."""
    if csf.n <= 2:
        return 0 if csf.n == 1 else 2
    return abs(csf[(csf.n - 1, 1)])


# ---------------------------------------------------------------------------
# generalized degree polynomial
# ---------------------------------------------------------------------------

def gdp(t: Tree) -> Poly:
    """sum over A ⊆ V of x^|A| y^d(A) z^e(A)."""
    order, _, children = _rooted(t)
    inside: list[Terms | None] = [None] * t.n
    outside: list[Terms | None] = [None] * t.n
    for v in reversed(order):
        pin: Terms = {(1, 0, 0): 1}
        pout: Terms = {(0, 0, 0): 1}
        for c in children[v]:
            ci, co = inside[c], outside[c]
            # v in A: edge to c internal if c in A, boundary otherwise
            f_in = terms_add(_shift(ci, 0, 0, 1), _shift(co, 0, 1, 0))
            # v not in A: edge boundary if c in A, absent otherwise
            f_out = terms_add(_shift(ci, 0, 1, 0), co)
            pin = terms_mul(pin, f_in)
            pout = terms_mul(pout, f_out)
            inside[c] = outside[c] = None
        inside[v], outside[v] = pin, pout
    r = order[0]
    return Poly(GDP_VARS, terms_add(inside[r], outside[r]))


def _shift(terms: Terms, *delta: int) -> Terms:
    return {tuple(a + b for a, b in zip(e, delta)): c for e, c in terms.items()}


def _neighbor_masks(t: Tree) -> list[int]:
    return [sum(1 << w for w in t.adj[v]) for v in range(t.n)]


def gdp_brute(t: Tree) -> Poly:
    """Oracle: enumerate all 2^n vertex subsets."""
    n = t.n
    if n > BRUTE_MAX_N:
        raise ValueError(f"brute-force oracle limited to n <= {BRUTE_MAX_N}")
    nbr = _neighbor_masks(t)
    deg = t.degrees()
    counts: Counter = Counter()
    for mask in range(1 << n):
        a = e2 = dsum = 0
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            a += 1
            e2 += (nbr[v] & mask).bit_count()
            dsum += deg[v]
            m ^= low
        e = e2 // 2
        counts[(a, dsum - e2, e)] += 1
    return Poly(GDP_VARS, counts)


# ---------------------------------------------------------------------------
# subtree polynomials
# ---------------------------------------------------------------------------

def hdp(t: Tree) -> Poly:
    """sum over subtrees S of y^d(S) z^e(S).

    For each vertex v, f(v) enumerates subtrees whose top vertex (closest
    to the root) is v, restricted to v's descendants:
    f(v) = prod over children c of (y + z f(c))."""
    order, parent, children = _rooted(t)
    f: list[Terms | None] = [None] * t.n
    total: Terms = {}
    for v in reversed(order):
        cur: Terms = {(0, 0): 1}
        for c in children[v]:
            factor = _shift(f[c], 0, 1)
            factor[(1, 0)] = factor.get((1, 0), 0) + 1
            cur = terms_mul(cur, factor)
        f[v] = cur
        total = terms_add(total, cur if parent[v] < 0 else _shift(cur, 1, 0))
    return Poly(HDP_VARS, total)


def soup(t: Tree) -> Poly:
    """sum over subtrees S of x^e(S) y^d(S) z^ℓ(S), ℓ = number of leaf edges.

    DP state per vertex v and class k in {0, 1, 2+} of the number of
    children kept in the subtree; the exponent slot L counts leaves of the
    subtree strictly below v.  A subtree with at least two edges has exactly
    as many leaf edges as leaves; one edge is one leaf edge."""
    order, parent, children = _rooted(t)
    state: list[list[Terms] | None] = [None] * t.n
    total: Terms = {}
    for v in reversed(order):
        cur: list[Terms] = [{(0, 0, 0): 1}, {}, {}]
        for c in children[v]:
            sc = state[c]
            # c kept: edge v-c internal, c is a leaf iff it keeps no children
            kept = terms_add(_shift(sc[0], 1, 0, 1), terms_add(_shift(sc[1], 1, 0, 0), _shift(sc[2], 1, 0, 0)))
            nxt: list[Terms] = [{}, {}, {}]
            for k in range(3):
                if not cur[k]:
                    continue
                # c dropped: edge v-c is a boundary edge
                nxt[k] = terms_add(nxt[k], _shift(cur[k], 0, 1, 0))
                if kept:
                    k2 = min(k + 1, 2)
                    nxt[k2] = terms_add(nxt[k2], terms_mul(cur[k], kept))
            cur = nxt
            state[c] = None
        state[v] = cur
        up = 1 if parent[v] >= 0 else 0
        for k in range(3):
            for (e, d, leaves), cnt in cur[k].items():
                leaves += 1 if k == 1 else 0
                if e == 0:
                    ell = 0
                elif e == 1:
                    ell = 1
                else:
                    ell = leaves
                key = (e, d + up, ell)
                total[key] = total.get(key, 0) + cnt
    return Poly(SOUP_VARS, {k: c for k, c in total.items() if c})


def stp(t: Tree) -> Poly:
    """sum over subtrees S of q^e(S) r^ℓ(S)."""
    return stp_from_soup(soup(t))


def stp_from_soup(s: Poly) -> Poly:
    out: Terms = {}
    for (e, _d, ell), c in s.terms.items():
        out[(e, ell)] = out.get((e, ell), 0) + c
    return Poly(STP_VARS, out)


def hdp_from_soup(s: Poly) -> Poly:
    out: Terms = {}
    for (e, d, _ell), c in s.terms.items():
        out[(d, e)] = out.get((d, e), 0) + c
    return Poly(HDP_VARS, out)


def hdp_from_gdp(g: Poly) -> Poly:
    """h(b, c) = g(c + 1, b, c)."""
    return Poly(HDP_VARS, {(b, c): k for (a, b, c), k in g.terms.items() if a == c + 1})


def subtree_census_brute(t: Tree) -> Counter:
    """Oracle: (e(S), d(S), ℓ(S)) over all vertex subsets inducing a subtree.
    A nonempty vertex set of a tree induces a subtree iff it spans |A|-1
    edges."""
    n = t.n
    if n > BRUTE_MAX_N:
        raise ValueError(f"brute-force oracle limited to n <= {BRUTE_MAX_N}")
    nbr = _neighbor_masks(t)
    deg = t.degrees()
    census: Counter = Counter()
    for mask in range(1, 1 << n):
        a = e2 = dsum = 0
        inner_deg = []
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            k = (nbr[v] & mask).bit_count()
            a += 1
            e2 += k
            dsum += deg[v]
            inner_deg.append((v, k))
            m ^= low
        e = e2 // 2
        if e != a - 1:
            continue
        leaf = {v for v, k in inner_deg if k == 1}
        ell = sum(1 for u, w in t.edges if (mask >> u & 1) and (mask >> w & 1) and (u in leaf or w in leaf))
        census[(e, dsum - e2, ell)] += 1
    return census


def hdp_brute(t: Tree) -> Poly:
    out: Counter = Counter()
    for (e, d, _ell), c in subtree_census_brute(t).items():
        out[(d, e)] += c
    return Poly(HDP_VARS, out)


def stp_brute(t: Tree) -> Poly:
    out: Counter = Counter()
    for (e, _d, ell), c in subtree_census_brute(t).items():
        out[(e, ell)] += c
    return Poly(STP_VARS, out)


def soup_brute(t: Tree) -> Poly:
    return Poly(SOUP_VARS, subtree_census_brute(t))


def uhdp(t: Tree) -> Poly:
    """hdp(T) - ℓ(T)·y: subtrees containing a non-leaf vertex.  Extended to
    every n with ℓ(single vertex) = 0 and ℓ(edge) = 2."""
    return hdp(t) - Poly.var(HDP_VARS, "y") * t.leaf_count()


def subtree_count(t: Tree) -> int:
    return sum(hdp(t).terms.values())


# ---------------------------------------------------------------------------
# closed forms for caterpillars
# ---------------------------------------------------------------------------

def _check_signature(alpha: Sequence[int]) -> tuple[int, ...]:
    alpha = check_composition(alpha)
    if len(alpha) >= 2 and (alpha[0] < 2 or alpha[-1] < 2):
        raise ValueError(f"caterpillar signature needs first and last parts >= 2: {alpha}")
    return alpha


def gdp_cat(alpha: Sequence[int]) -> Poly:
    """GDP of Cat(α) by summing over spine subsets U: each pendant leaf of a
    spine vertex in U contributes (xz + y), otherwise (xy + 1)."""
    alpha = _check_signature(alpha)
    k = len(alpha)
    x = Poly.var(GDP_VARS, "x")
    y = Poly.var(GDP_VARS, "y")
    z = Poly.var(GDP_VARS, "z")
    leaf_in = x * z + y
    leaf_out = x * y + 1
    in_pows = {}
    out_pows = {}
    total = Poly(GDP_VARS)
    pendant_total = sum(a - 1 for a in alpha)
    for mask in range(1 << k):
        size = mask.bit_count()
        dd = sum(1 for i in range(k - 1) if (mask >> i & 1) != (mask >> (i + 1) & 1))
        ee = sum(1 for i in range(k - 1) if (mask >> i & 1) and (mask >> (i + 1) & 1))
        p_in = sum(alpha[i] - 1 for i in range(k) if mask >> i & 1)
        p_out = pendant_total - p_in
        if p_in not in in_pows:
            in_pows[p_in] = leaf_in ** p_in
        if p_out not in out_pows:
            out_pows[p_out] = leaf_out ** p_out
        mono = Poly.monomial(GDP_VARS, (size, dd, ee))
        total = total + mono * in_pows[p_in] * out_pows[p_out]
    return total


def hdp_cat(alpha: Sequence[int]) -> Poly:
    """HDP of Cat(α): single leaves plus one term per spine interval i..j."""
    alpha = _check_signature(alpha)
    k = len(alpha)
    n = sum(alpha)
    y = Poly.var(HDP_VARS, "y")
    z = Poly.var(HDP_VARS, "z")
    s = y + z
    total = y * (n - k)
    for i in range(k):
        pend = 0
        for j in range(i, k):
            pend += alpha[j] - 1
            ends = (1 if i > 0 else 0) + (1 if j < k - 1 else 0)
            total = total + Poly.monomial(HDP_VARS, (ends, j - i)) * s ** pend
    return total


def closed_form_matches(alpha: Sequence[int]) -> bool:
    t = cat(alpha)
    return gdp_cat(alpha) == gdp(t) and hdp_cat(alpha) == hdp(t)


# ---------------------------------------------------------------------------
# near-contraction recurrence
# ---------------------------------------------------------------------------

def recurrence_sides(t: Tree, e: Sequence[int]) -> tuple[Poly, Poly]:
    """Both sides of the near-contraction recurrence for Ū, multiplied
    through by (y + z):

        (y+z) Ū(T)  and  y (Ū(T1') + Ū(T2')) + z Ū(T ⊙ e)
    """
    t1, t2 = edge_split(t, e)
    y = Poly.var(HDP_VARS, "y")
    z = Poly.var(HDP_VARS, "z")
    lhs = (y + z) * uhdp(t)
    rhs = y * (uhdp(t1) + uhdp(t2)) + z * uhdp(near_contract(t, e))
    return lhs, rhs


def recurrence_rhs(t: Tree, e: Sequence[int]) -> Poly:
    return recurrence_sides(t, e)[1]


def recurrence_holds(t: Tree) -> bool:
    """Check the recurrence on every non-leaf edge of ``t``, in both
    orientations."""
    for v, w in non_leaf_edges(t):
        for e in ((v, w), (w, v)):
            lhs, rhs = recurrence_sides(t, e)
            if lhs != rhs:
                return False
    return True
