"""Exact arithmetic substrate: partitions, compositions, sparse integer
polynomials and dense rational matrices."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import comb, prod
from typing import Iterable, Iterator, Mapping, Sequence

Partition = tuple[int, ...]
Composition = tuple[int, ...]
Exponents = tuple[int, ...]


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero whenever an argument is out of range."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


# ---------------------------------------------------------------------------
# partitions and compositions
# ---------------------------------------------------------------------------

def partitions_of(n: int, max_part: int | None = None) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out: list[Partition] = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return out


def multiplicities(parts: Iterable[int]) -> Counter:
    return Counter(parts)


def multiset_binomial(lam: Sequence[int], mu: Sequence[int]) -> int:
    """prod_i C(m_i(lam), m_i(mu)): the number of ways to pick the parts of
    ``mu`` out of the parts of ``lam``."""
    ml = Counter(lam)
    out = 1
    for part, m in Counter(mu).items():
        out *= binom(ml.get(part, 0), m)
        if not out:
            return 0
    return out


def is_composition(alpha: Sequence[int]) -> bool:
    return len(alpha) > 0 and all(isinstance(a, int) and a >= 1 for a in alpha)


def check_composition(alpha: Sequence[int]) -> Composition:
    alpha = tuple(alpha)
    if not is_composition(alpha):
        raise ValueError(f"not a composition: {alpha!r}")
    return alpha


def coarsenings(alpha: Sequence[int]) -> Iterator[Composition]:
    """Every coarsening of ``alpha`` (merge adjacent runs), one per subset of
    the ``len(alpha) - 1`` merge points.  The finest (``alpha`` itself) comes
    first."""
    alpha = check_composition(alpha)
    k = len(alpha)
    for mask in range(1 << (k - 1)):
        parts = []
        acc = alpha[0]
        for i in range(1, k):
            if mask >> (i - 1) & 1:
                acc += alpha[i]
            else:
                parts.append(acc)
                acc = alpha[i]
        parts.append(acc)
        yield tuple(parts)


def compositions_of(n: int) -> Iterator[Composition]:
    """All compositions of ``n >= 1``."""
    yield from coarsenings((1,) * n)


# ---------------------------------------------------------------------------
# sparse polynomials
# ---------------------------------------------------------------------------

Terms = dict[Exponents, int]


def terms_add(a: Mapping[Exponents, int], b: Mapping[Exponents, int], scale: int = 1) -> Terms:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def terms_mul(a: Mapping[Exponents, int], b: Mapping[Exponents, int]) -> Terms:
    """Product of two term maps over the same variable slots."""
    if len(a) > len(b):
        a, b = b, a
    out: Terms = {}
    get = out.get
    bi = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bi:
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


class Poly:
    """Exact multivariate polynomial with integer coefficients.

    ``vars`` names the exponent slots; ``terms`` maps exponent tuples to
    nonzero coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponents, int] | None = None):
        self.vars = tuple(vars)
        k = len(self.vars)
        clean: Terms = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != k:
                raise ValueError(f"exponent {e} does not match variables {self.vars}")
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, vars: Sequence[str], c: int) -> "Poly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars: Sequence[str], name: str, power: int = 1) -> "Poly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = power
        return cls(vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, vars: Sequence[str], exps: Sequence[int], c: int = 1) -> "Poly":
        return cls(vars, {tuple(exps): c})

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, int):
            return Poly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly(self.vars, terms_add(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly(self.vars, terms_add(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly(self.vars, terms_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Poly({self.to_text()!r}, vars={self.vars})"

    # queries ------------------------------------------------------------
    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def evaluate(self, values: Mapping[str, int | Fraction] | Sequence[int | Fraction]):
        if isinstance(values, Mapping):
            values = [values[v] for v in self.vars]
        return sum(c * prod(v**k for v, k in zip(values, e)) for e, c in self.terms.items())

    def degree(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Exponents, int]]:
        return sorted(self.terms.items())

    # change of variables ------------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "Poly":
        """Re-embed into a superset (or reordering) of the variable slots."""
        vars = tuple(vars)
        idx = []
        for v in self.vars:
            if v not in vars:
                if any(e[self.vars.index(v)] for e in self.terms):
                    raise ValueError(f"variable {v} in use, cannot drop")
                idx.append(None)
            else:
                idx.append(vars.index(v))
        out: Terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for j, k in zip(idx, e):
                if j is not None:
                    ne[j] += k
            out[tuple(ne)] = c
        return Poly(vars, out)

    def substitute(self, mapping: Mapping[str, "Poly"], target_vars: Sequence[str] | None = None) -> "Poly":
        """Replace each variable named in ``mapping`` by a polynomial.

        Replacement polynomials and untouched variables are embedded into
        ``target_vars`` (default: the replacement variables of the first
        mapped value, extended by whatever this polynomial keeps)."""
        if target_vars is None:
            keep = [v for v in self.vars if v not in mapping]
            target = list(next(iter(mapping.values())).vars) if mapping else []
            for v in keep:
                if v not in target:
                    target.append(v)
            target_vars = tuple(target)
        target_vars = tuple(target_vars)
        repl = {k: p.with_vars(target_vars) for k, p in mapping.items()}
        powers: dict[tuple[str, int], Poly] = {}

        def power(name: str, k: int) -> Poly:
            key = (name, k)
            if key not in powers:
                powers[key] = repl[name] ** k
            return powers[key]

        total: Terms = {}
        for e, c in self.terms.items():
            mono = [0] * len(target_vars)
            term = Poly.const(target_vars, c)
            for name, k in zip(self.vars, e):
                if not k:
                    continue
                if name in repl:
                    term = term * power(name, k)
                else:
                    mono[target_vars.index(name)] += k
            if any(mono):
                term = term * Poly.monomial(target_vars, mono)
            total = terms_add(total, term.terms)
        return Poly(target_vars, total)

    def divide_by_sum(self, a: str, b: str, times: int = 1) -> "Poly":
        """Exact quotient by ``(a + b)**times``; raises ArithmeticError if the
        division leaves a remainder."""
        ia, ib = self.vars.index(a), self.vars.index(b)
        cur = self
        for _ in range(times):
            rem = dict(cur.terms)
            quot: Terms = {}
            while rem:
                # leading term: highest power of a, ties broken by exponent tuple
                e = max(rem, key=lambda t: (t[ia], t))
                c = rem[e]
                if e[ia] == 0:
                    raise ArithmeticError(f"{cur.to_text()} is not divisible by ({a}+{b})")
                q = list(e)
                q[ia] -= 1
                q = tuple(q)
                quot[q] = quot.get(q, 0) + c
                del rem[e]
                other = list(q)
                other[ib] += 1
                rem = terms_add(rem, {tuple(other): c}, -1)
            cur = Poly(self.vars, quot)
        return cur

    # serialization ------------------------------------------------------
    def to_text(self) -> str:
        """Canonical text: terms in ascending lexicographic exponent order."""
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.vars, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            body = "*".join([str(mag)] + factors) if factors else str(mag)
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(("+ " if c > 0 else "- ") + body)
        return " ".join(pieces)

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"coeff": c, "exponents": list(e)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Poly":
        return cls(obj["vars"], {tuple(t["exponents"]): t["coeff"] for t in obj["terms"]})


# ---------------------------------------------------------------------------
# rational matrices
# ---------------------------------------------------------------------------

class SingularMatrixError(ArithmeticError):
    pass


class RationalMatrix:
    """Dense matrix of reduced fractions."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[int | Fraction]]):
        self.rows = [[Fraction(x) for x in row] for row in rows]
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            cols = list(zip(*other.rows))
            return RationalMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])
        vec = [Fraction(x) for x in other]
        if len(vec) != self.shape[1]:
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(r, vec)) for r in self.rows]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def __repr__(self):
        return f"RationalMatrix({[[str(x) for x in r] for r in self.rows]})"


def _require_square(m: RationalMatrix) -> int:
    r, c = m.shape
    if r != c:
        raise ValueError(f"matrix is {r}x{c}, not square")
    return r


def mat_det(m: RationalMatrix) -> Fraction:
    n = _require_square(m)
    a = [row[:] for row in m.rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                ar, ac = a[r], a[col]
                for k in range(col, n):
                    ar[k] -= f * ac[k]
    return det


def _gauss_jordan(m: RationalMatrix, rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    n = _require_square(m)
    a = [row[:] + extra[:] for row, extra in zip(m.rows, rhs)]
    width = len(a[0]) if a else 0
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                ar, ac = a[r], a[col]
                for k in range(col, width):
                    ar[k] -= f * ac[k]
    return [row[n:] for row in a]


def mat_solve(m: RationalMatrix, v: Sequence[int | Fraction]) -> list[Fraction]:
    if len(v) != m.shape[0]:
        raise ValueError("dimension mismatch")
    return [row[0] for row in _gauss_jordan(m, [[Fraction(x)] for x in v])]


def mat_inverse(m: RationalMatrix) -> RationalMatrix:
    n = _require_square(m)
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return RationalMatrix(_gauss_jordan(m, eye))


def block_diagonal(blocks: Sequence[RationalMatrix]) -> RationalMatrix:
    size = sum(b.shape[0] for b in blocks)
    rows = [[Fraction(0)] * size for _ in range(size)]
    off = 0
    for b in blocks:
        k = b.shape[0]
        for i in range(k):
            rows[off + i][off:off + k] = b.rows[i]
        off += k
    return RationalMatrix(rows)
