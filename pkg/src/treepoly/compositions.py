"""Composition algebra behind caterpillars with equal HDP.

H̄(α) = Σ_{γ ≥ α} y^(ℓ(γ)-1) z^(ℓ(α)-ℓ(γ)) / (y+z)^(ℓ(α)-1) · Σ_i x_{γ_i}

is kept in cleared form: a polynomial in y, z, x_1..x_N together with the
exponent of the (y + z) denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .algebra import Composition, Poly, check_composition, coarsenings
from .invariants import HDP_VARS, hdp, uhdp
from .trees import PolarizedTree, Tree, canonical_code, cap, cat, compose_tree

HBAR_MAX_LENGTH = 20


# ---------------------------------------------------------------------------
# basic operations
# ---------------------------------------------------------------------------

def reverse(alpha: Sequence[int]) -> Composition:
    return check_composition(alpha)[::-1]


def concat(alpha: Sequence[int], beta: Sequence[int]) -> Composition:
    return check_composition(alpha) + check_composition(beta)


def near_concat(alpha: Sequence[int], beta: Sequence[int]) -> Composition:
    alpha, beta = check_composition(alpha), check_composition(beta)
    return alpha[:-1] + (alpha[-1] + beta[0],) + beta[1:]


def odot_power(beta: Sequence[int], i: int) -> Composition:
    beta = check_composition(beta)
    if i < 1:
        raise ValueError("power must be >= 1")
    out = beta
    for _ in range(i - 1):
        out = near_concat(out, beta)
    return out


def compose(alpha: Sequence[int], beta: Sequence[int]) -> Composition:
    """α ∘ β = β^{⊙a_1} · β^{⊙a_2} · …"""
    alpha = check_composition(alpha)
    out: Composition = ()
    for a in alpha:
        out += odot_power(beta, a)
    return out


def compose_all(factors: Sequence[Sequence[int]]) -> Composition:
    out = check_composition(factors[0])
    for f in factors[1:]:
        out = compose(out, f)
    return out


def caterpillar_signature(alpha: Sequence[int]) -> Composition:
    """1 ⊙ α ⊙ 1."""
    return near_concat(near_concat((1,), alpha), (1,))


def caterpillar_of(alpha: Sequence[int]) -> Tree:
    """Cat(1 ⊙ α ⊙ 1)."""
    return cat(caterpillar_signature(alpha))


# ---------------------------------------------------------------------------
# H̄ in cleared form
# ---------------------------------------------------------------------------

def hbar_vars(nmax: int) -> tuple[str, ...]:
    return ("y", "z") + tuple(f"x{i}" for i in range(1, nmax + 1))


@dataclass(frozen=True)
class HbarPoly:
    """Represents ``cleared / (y + z) ** denom_exp``."""

    cleared: Poly
    denom_exp: int

    def _aligned(self, other: "HbarPoly") -> tuple[Poly, Poly]:
        width = max(len(self.cleared.vars), len(other.cleared.vars)) - 2
        names = hbar_vars(width)
        return self.cleared.with_vars(names), other.cleared.with_vars(names)

    def __eq__(self, other):
        if not isinstance(other, HbarPoly):
            return NotImplemented
        a, b = self._aligned(other)
        y = Poly.var(a.vars, "y")
        z = Poly.var(a.vars, "z")
        s = y + z
        da, db = self.denom_exp, other.denom_exp
        lo = min(da, db)
        return a * s ** (db - lo) == b * s ** (da - lo)

    def __hash__(self):
        raise TypeError("HbarPoly is compared by cross-multiplication and is not hashable")


def _check_length(alpha: Composition) -> None:
    if len(alpha) > HBAR_MAX_LENGTH:
        raise ValueError(f"length {len(alpha)} exceeds the cap of {HBAR_MAX_LENGTH} parts")


def hbar(alpha: Sequence[int]) -> HbarPoly:
    alpha = check_composition(alpha)
    _check_length(alpha)
    names = hbar_vars(sum(alpha))
    k = len(alpha)
    terms: dict = {}
    for gamma in coarsenings(alpha):
        lg = len(gamma)
        for part in gamma:
            e = [0] * len(names)
            e[0] = lg - 1
            e[1] = k - lg
            e[1 + part] += 1
            key = tuple(e)
            terms[key] = terms.get(key, 0) + 1
    return HbarPoly(Poly(names, terms), k - 1)


def hbar_substitute(h: HbarPoly, values: dict[int, HbarPoly]) -> HbarPoly:
    """Replace every x_i by the value ``values[i]`` (each an H̄)."""
    width = max([len(h.cleared.vars) - 2] + [len(v.cleared.vars) - 2 for v in values.values()])
    names = hbar_vars(width)
    base = h.cleared.with_vars(names)
    s = Poly.var(names, "y") + Poly.var(names, "z")
    used = sorted({i for e in base.terms for i in range(1, len(names) - 1) if e[1 + i]})
    missing = [i for i in used if i not in values]
    if missing:
        raise KeyError(f"no value for x{missing[0]}")
    top = max((values[i].denom_exp for i in used), default=0)
    total = Poly(names)
    for e, c in base.terms.items():
        yz = Poly.monomial(names, (e[0], e[1]) + (0,) * (len(names) - 2), c)
        # H̄ is linear in the x's
        (i,) = [j for j in range(1, len(names) - 1) if e[1 + j]]
        v = values[i]
        total = total + yz * v.cleared.with_vars(names) * s ** (top - v.denom_exp)
    return HbarPoly(total, h.denom_exp + top)


def hbar_specialize(alpha: Sequence[int]) -> Poly:
    """H̄(α) at x_i = (y + z)^(i + 1); equals uhdp(Cat(1 ⊙ α ⊙ 1))."""
    h = hbar(alpha)
    names = h.cleared.vars
    y = Poly.var(HDP_VARS, "y")
    z = Poly.var(HDP_VARS, "z")
    mapping = {name: (y + z) ** (int(name[1:]) + 1) for name in names[2:]}
    mapping["y"] = y
    mapping["z"] = z
    num = h.cleared.substitute(mapping, HDP_VARS)
    return num.divide_by_sum("y", "z", h.denom_exp)


def hbar_recurrence_check(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """(y+z) H̄(α·β) = y (H̄(α) + H̄(β)) + z H̄(α⊙β), cleared of the common
    denominator (y+z)^(ℓ(α)+ℓ(β)-1):

        C(α·β) = y (C(α) (y+z)^(ℓ(β)-1) + C(β) (y+z)^(ℓ(α)-1)) + z C(α⊙β)
    """
    alpha, beta = check_composition(alpha), check_composition(beta)
    names = hbar_vars(sum(alpha) + sum(beta))
    c_ab = hbar(concat(alpha, beta)).cleared.with_vars(names)
    c_a = hbar(alpha).cleared.with_vars(names)
    c_b = hbar(beta).cleared.with_vars(names)
    c_n = hbar(near_concat(alpha, beta)).cleared.with_vars(names)
    y = Poly.var(names, "y")
    z = Poly.var(names, "z")
    s = y + z
    rhs = y * (c_a * s ** (len(beta) - 1) + c_b * s ** (len(alpha) - 1)) + z * c_n
    return c_ab == rhs


def uhdp_recurrence_check(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """Same recurrence with H̄ replaced by γ ↦ uhdp(Cat(1 ⊙ γ ⊙ 1)), which has
    no denominators."""
    def u(g):
        return uhdp(caterpillar_of(g))

    y = Poly.var(HDP_VARS, "y")
    z = Poly.var(HDP_VARS, "z")
    lhs = (y + z) * u(concat(alpha, beta))
    rhs = y * (u(alpha) + u(beta)) + z * u(near_concat(alpha, beta))
    return lhs == rhs


# ---------------------------------------------------------------------------
# L-polynomial
# ---------------------------------------------------------------------------

def lpoly(alpha: Sequence[int]) -> Poly:
    """Σ_{γ ≥ α} Π_i x_{γ_i}."""
    alpha = check_composition(alpha)
    _check_length(alpha)
    names = tuple(f"x{i}" for i in range(1, sum(alpha) + 1))
    terms: dict = {}
    for gamma in coarsenings(alpha):
        e = [0] * len(names)
        for part in gamma:
            e[part - 1] += 1
        key = tuple(e)
        terms[key] = terms.get(key, 0) + 1
    return Poly(names, terms)


def hbar_from_lpoly(lp: Poly) -> HbarPoly:
    """Each monomial Π x_{γ_i} gives ℓ(γ) and the multiset of parts, which
    is all H̄ needs; ℓ(α) is the top degree."""
    width = len(lp.vars)
    names = hbar_vars(width)
    k = max(sum(e) for e in lp.terms)
    terms: dict = {}
    for e, c in lp.terms.items():
        lg = sum(e)
        for i, m in enumerate(e, 1):
            if not m:
                continue
            key = [0] * len(names)
            key[0] = lg - 1
            key[1] = k - lg
            key[1 + i] = 1
            key = tuple(key)
            terms[key] = terms.get(key, 0) + c * m
    return HbarPoly(Poly(names, terms), k - 1)


# ---------------------------------------------------------------------------
# factorization and switching
# ---------------------------------------------------------------------------

def _all_ones(alpha: Composition) -> bool:
    return all(a == 1 for a in alpha)


def _nontrivial_pair(left: Composition, right: Composition) -> bool:
    if left == (1,) or right == (1,):
        return False
    if len(left) == 1 and len(right) == 1:
        return False
    if _all_ones(left) and _all_ones(right):
        return False
    return True


def is_nontrivial(factors: Sequence[Composition]) -> bool:
    if any(tuple(f) == (1,) for f in factors):
        return False
    return all(_nontrivial_pair(tuple(a), tuple(b)) for a, b in zip(factors, factors[1:]))


def _parse_powers(alpha: Composition, beta: Composition) -> list[Composition]:
    """Every γ with γ ∘ β = α."""
    d = sum(beta)
    powers: dict[int, Composition] = {}

    def power(i: int) -> Composition:
        if i not in powers:
            powers[i] = odot_power(beta, i)
        return powers[i]

    found: list[Composition] = []

    def rec(pos: int, acc: tuple[int, ...], remaining: int) -> None:
        if pos == len(alpha):
            if remaining == 0:
                found.append(acc)
            return
        for g in range(1, remaining // d + 1):
            chunk = power(g)
            if alpha[pos:pos + len(chunk)] == chunk:
                rec(pos + len(chunk), acc + (g,), remaining - g * d)

    rec(0, (), sum(alpha))
    return found


def binary_splits(alpha: Sequence[int]) -> list[tuple[Composition, Composition]]:
    """All nontrivial ``(γ, β)`` with ``γ ∘ β = α``.

    ``|γ ∘ β| = |γ| |β|`` and β^{⊙γ_1} is a prefix of α, so β is pinned down
    by its length m and size d: its first m-1 parts are those of α."""
    alpha = check_composition(alpha)
    total = sum(alpha)
    out = []
    seen = set()
    for d in range(1, total + 1):
        if total % d:
            continue
        for m in range(1, len(alpha) + 1):
            head = alpha[:m - 1]
            last = d - sum(head)
            if last < 1:
                break
            beta = head + (last,)
            if beta in seen:
                continue
            seen.add(beta)
            for gamma in _parse_powers(alpha, beta):
                if _nontrivial_pair(gamma, beta):
                    out.append((gamma, beta))
    return out


class FactorizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Factorization:
    factors: tuple[Composition, ...]

    def compose(self) -> Composition:
        return compose_all(self.factors)

    def __len__(self):
        return len(self.factors)


def irreducible_factorization(alpha: Sequence[int]) -> Factorization:
    """Unique irreducible factorization, found by exhaustive split search.
    Raises FactorizationError if two different maximal factorizations turn
    up."""
    alpha = check_composition(alpha)
    memo: dict[Composition, set[tuple[Composition, ...]]] = {}

    def factorizations(a: Composition) -> set[tuple[Composition, ...]]:
        if a in memo:
            return memo[a]
        results: set[tuple[Composition, ...]] = set()
        for gamma, beta in binary_splits(a):
            for left in factorizations(gamma):
                for right in factorizations(beta):
                    cand = left + right
                    if is_nontrivial(cand):
                        results.add(cand)
        if not results:
            results = {(a,)}
        else:
            top = max(len(r) for r in results)
            results = {r for r in results if len(r) == top}
        memo[a] = results
        return results

    found = factorizations(alpha)
    if len(found) != 1:
        raise FactorizationError(f"{alpha}: several irreducible factorizations {sorted(found)}")
    (factors,) = found
    if compose_all(factors) != alpha:
        raise FactorizationError(f"{factors} does not compose to {alpha}")
    return Factorization(factors)


def switching_class(alpha: Sequence[int], up_to_reversal: bool = False) -> list[Composition]:
    """All switches β_1 ∘ … ∘ β_k with β_i ∈ {α_i, α_i*}, sorted.  With
    ``up_to_reversal`` each class member is replaced by min(β, β*)."""
    fac = irreducible_factorization(alpha).factors
    members = set()
    for choice in product(*[(f, f[::-1]) for f in fac]):
        beta = compose_all(choice)
        members.add(min(beta, beta[::-1]) if up_to_reversal else beta)
    return sorted(members)


def non_palindromic_factor_count(alpha: Sequence[int]) -> int:
    return sum(1 for f in irreducible_factorization(alpha).factors if f != f[::-1])


# ---------------------------------------------------------------------------
# caterpillar pairs from gap-free polynomials
# ---------------------------------------------------------------------------

def is_gap_free(p: Sequence[int]) -> bool:
    p = list(p)
    if not p or any(c not in (0, 1) for c in p):
        return False
    if p[0] != 1 or p[-1] != 1:
        return False
    return all(not (a == 0 and b == 0) for a, b in zip(p, p[1:]))


def gap_free_signatures(p: Sequence[int], a: int, b: int) -> tuple[Composition, Composition]:
    """Coefficient lists of (a + b x) p(x) and (b + a x) p(x) with 1 added to
    the first and last entries.  ``p`` lists coefficients from degree 0."""
    if not is_gap_free(p):
        raise ValueError(f"polynomial {list(p)} is not gap-free")
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")

    def lst(u: int, v: int) -> Composition:
        coeffs = [0] * (len(p) + 1)
        for i, c in enumerate(p):
            coeffs[i] += u * c
            coeffs[i + 1] += v * c
        coeffs[0] += 1
        coeffs[-1] += 1
        return tuple(coeffs)

    return lst(a, b), lst(b, a)


def gap_free_pair(p: Sequence[int], a: int, b: int) -> tuple[Tree, Tree]:
    s1, s2 = gap_free_signatures(p, a, b)
    return cat(s1), cat(s2)


def gap_free_factors(p: Sequence[int], a: int, b: int) -> tuple[Composition, Composition]:
    """(β, (a, b)) with C_{p,1} = Cat(1 ⊙ (β ∘ (a,b)) ⊙ 1), β the gaps between
    the zero coefficients of p."""
    if not is_gap_free(p):
        raise ValueError(f"polynomial {list(p)} is not gap-free")
    cuts = [0] + [i for i, c in enumerate(p) if c == 0] + [len(p) - 1]
    beta = tuple(y - x for x, y in zip(cuts, cuts[1:]))
    if not beta:
        beta = (1,)
    return beta, (a, b)


# ---------------------------------------------------------------------------
# polarized-tree families
# ---------------------------------------------------------------------------

FAMILY_MAX_VERTICES = 64


def hdp_family(alpha: Sequence[int], a: PolarizedTree, max_vertices: int = FAMILY_MAX_VERTICES) -> list[Tree]:
    """{cap(β ∘ A) : β switch of α}, one tree per isomorphism class, sorted
    by canonical code."""
    alpha = check_composition(alpha)
    # near-concatenation keeps every vertex, so |β ∘ A| = |β| |A|
    size = sum(alpha) * a.tree.n + 2
    if size > max_vertices:
        raise ValueError(f"family members would have up to {size} vertices (cap {max_vertices})")
    out: dict[bytes, Tree] = {}
    for beta in switching_class(alpha):
        t = cap(compose_tree(beta, a))
        out.setdefault(canonical_code(t), t)
    return [out[k] for k in sorted(out)]


def family_shares_hdp(trees: Iterable[Tree]) -> bool:
    polys = {hdp(t).to_text() for t in trees}
    return len(polys) <= 1
