"""Sparse polynomials in the theta coordinates ``X_sigma`` and exact linear algebra.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable,
with every exponent positive; variables are bitmasks in ``range(2**g)``.
Coefficients are :class:`fractions.Fraction` for the exact ring; the same
container also carries complex coefficients for numerically reconstructed
quartics (only the operations that make sense there are used).
"""

from __future__ import annotations

import math
import re
from collections import deque
from fractions import Fraction
from itertools import combinations_with_replacement
from numbers import Number
from typing import Iterable, Mapping, Sequence

from .heisgroup import BitVec, GenusMismatch, HeisElem, act_on_index

Monomial = tuple[tuple[int, int], ...]

ONE: Monomial = ()


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_key(m: Monomial) -> tuple:
    """Canonical total order: degree, then variable indices, then exponents."""
    return (monomial_degree(m), tuple(v for v, _ in m), tuple(e for _, e in m))


def monomial_from_vars(variables: Iterable[int]) -> Monomial:
    counts: dict[int, int] = {}
    for v in variables:
        counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.items()))


def monomial_vars(m: Monomial) -> list[int]:
    return [v for v, e in m for _ in range(e)]


def monomial_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    counts = dict(m1)
    for v, e in m2:
        counts[v] = counts.get(v, 0) + e
    return tuple(sorted(counts.items()))


def monomials_of_degree(g: int, n: int) -> list[Monomial]:
    """All degree-``n`` monomials in ``2**g`` variables, in canonical order."""
    mons = [monomial_from_vars(c) for c in combinations_with_replacement(range(1 << g), n)]
    mons.sort(key=monomial_key)
    return mons


def _coerce(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, Number):
        return c
    raise TypeError(f"unsupported coefficient {c!r}")


class ThetaPoly:
    """Polynomial in the ``2**g`` variables ``X_sigma``; zero coefficients are never stored."""

    __slots__ = ("g", "_terms")

    def __init__(self, g: int, terms: Mapping[Monomial, object] | None = None):
        self.g = g
        self._terms: dict[Monomial, object] = {}
        nvars = 1 << g
        for m, c in (terms or {}).items():
            c = _coerce(c)
            if c == 0:
                continue
            for v, e in m:
                if not 0 <= v < nvars or e <= 0:
                    raise ValueError(f"bad monomial {m} for g={g}")
            self._terms[m] = c

    @classmethod
    def _raw(cls, g: int, terms: dict[Monomial, object]) -> ThetaPoly:
        p = cls.__new__(cls)
        p.g = g
        p._terms = terms
        return p

    @classmethod
    def zero(cls, g: int) -> ThetaPoly:
        return cls._raw(g, {})

    @classmethod
    def constant(cls, g: int, c) -> ThetaPoly:
        return cls(g, {ONE: c})

    @classmethod
    def var(cls, g: int, sigma: int | BitVec) -> ThetaPoly:
        if isinstance(sigma, BitVec):
            if sigma.g != g:
                raise GenusMismatch(f"variable of genus {sigma.g} in ring of genus {g}")
            sigma = sigma.bits
        return cls(g, {((sigma, 1),): Fraction(1)})

    @classmethod
    def monomial(cls, g: int, variables: Iterable[int], coeff=1) -> ThetaPoly:
        return cls(g, {monomial_from_vars(variables): coeff})

    @property
    def terms(self) -> dict[Monomial, object]:
        return dict(self._terms)

    def items(self) -> list[tuple[Monomial, object]]:
        """Terms in canonical monomial order."""
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]))

    def coefficient(self, m: Monomial):
        return self._terms.get(m, 0)

    def support(self) -> list[Monomial]:
        return sorted(self._terms, key=monomial_key)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        return max((monomial_degree(m) for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m) for m in self._terms}) <= 1

    def _check(self, other: ThetaPoly) -> None:
        if self.g != other.g:
            raise GenusMismatch(f"polynomials of genus {self.g} and {other.g}")

    def __add__(self, other: ThetaPoly) -> ThetaPoly:
        if not isinstance(other, ThetaPoly):
            return NotImplemented
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return ThetaPoly._raw(self.g, out)

    def __neg__(self) -> ThetaPoly:
        return ThetaPoly._raw(self.g, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: ThetaPoly) -> ThetaPoly:
        return self + (-other)

    def scale(self, c) -> ThetaPoly:
        c = _coerce(c)
        if c == 0:
            return ThetaPoly.zero(self.g)
        return ThetaPoly._raw(self.g, {m: a * c for m, a in self._terms.items()})

    def __mul__(self, other) -> ThetaPoly:
        if isinstance(other, ThetaPoly):
            self._check(other)
            out: dict[Monomial, object] = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    m = monomial_mul(m1, m2)
                    out[m] = out.get(m, 0) + c1 * c2
            return ThetaPoly._raw(self.g, {m: c for m, c in out.items() if c != 0})
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ThetaPoly:
        result = ThetaPoly.constant(self.g, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThetaPoly):
            return NotImplemented
        return self.g == other.g and self._terms == other._terms

    __hash__ = None

    def evaluate(self, point: Sequence):
        """Value at a coordinate vector indexed by bitmask."""
        total = 0
        for m, c in self._terms.items():
            term = c
            for v, e in m:
                term = term * point[v] ** e
            total = total + term
        return total

    def map_coefficients(self, f) -> ThetaPoly:
        return ThetaPoly(self.g, {m: f(c) for m, c in self._terms.items()})

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def to_text(self) -> str:
        return poly_to_text(self)

    def __repr__(self) -> str:
        return f"ThetaPoly(g={self.g}, {poly_to_text(self)})"


def poly_add(p: ThetaPoly, q: ThetaPoly) -> ThetaPoly:
    return p + q


def poly_mul(p: ThetaPoly, q: ThetaPoly) -> ThetaPoly:
    return p * q


def poly_scale(p: ThetaPoly, c) -> ThetaPoly:
    return p.scale(c)


# -- serialization ---------------------------------------------------------

def _coeff_text(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return repr(c)


def poly_to_text(p: ThetaPoly) -> str:
    """Canonical text form, e.g. ``1/1*X[0]^4 + -2/3*X[1]*X[2]^2``."""
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.items():
        factors = [f"X[{v}]" + (f"^{e}" if e > 1 else "") for v, e in m]
        parts.append("*".join([_coeff_text(c)] + factors))
    return " + ".join(parts)


_TERM = re.compile(r"^(-?\d+)/(\d+)((?:\*X\[\d+\](?:\^\d+)?)*)$")
_FACTOR = re.compile(r"\*X\[(\d+)\](?:\^(\d+))?")


def poly_from_text(g: int, text: str) -> ThetaPoly:
    text = text.strip()
    if text == "0":
        return ThetaPoly.zero(g)
    terms: dict[Monomial, Fraction] = {}
    for chunk in text.split(" + "):
        match = _TERM.match(chunk.strip())
        if match is None:
            raise ValueError(f"cannot parse term {chunk!r}")
        coeff = Fraction(int(match.group(1)), int(match.group(2)))
        variables: list[int] = []
        for v, e in _FACTOR.findall(match.group(3)):
            variables.extend([int(v)] * (int(e) if e else 1))
        m = monomial_from_vars(variables)
        terms[m] = terms.get(m, 0) + coeff
    return ThetaPoly(g, terms)


# -- Heisenberg action and differentiation ---------------------------------

def _index_action(x: HeisElem) -> list[tuple[Fraction, int]]:
    return [act_on_index(x, b) for b in range(1 << x.g)]


def act_on_monomial(table: list[tuple[Fraction, int]], m: Monomial) -> tuple[Fraction, Monomial]:
    coeff = Fraction(1)
    counts: dict[int, int] = {}
    for v, e in m:
        s, t = table[v]
        coeff *= s ** e
        counts[t] = counts.get(t, 0) + e
    return coeff, tuple(sorted(counts.items()))


def heis_act_poly(x: HeisElem, p: ThetaPoly) -> ThetaPoly:
    """Substitute ``X_b -> s chi(a+b) X_{a+b}`` in ``p``."""
    if x.g != p.g:
        raise GenusMismatch(f"group element of genus {x.g} acting on genus {p.g}")
    table = _index_action(x)
    out: dict[Monomial, object] = {}
    for m, c in p._terms.items():
        s, image = act_on_monomial(table, m)
        out[image] = out.get(image, 0) + c * s
    return ThetaPoly._raw(p.g, {m: c for m, c in out.items() if c != 0})


def partial_derivative(p: ThetaPoly, sigma: int | BitVec) -> ThetaPoly:
    if isinstance(sigma, BitVec):
        if sigma.g != p.g:
            raise GenusMismatch(f"variable of genus {sigma.g} in ring of genus {p.g}")
        sigma = sigma.bits
    out: dict[Monomial, object] = {}
    for m, c in p._terms.items():
        exps = dict(m)
        e = exps.get(sigma, 0)
        if e == 0:
            continue
        if e == 1:
            del exps[sigma]
        else:
            exps[sigma] = e - 1
        out[tuple(sorted(exps.items()))] = c * e
    return ThetaPoly._raw(p.g, out)


def invariant_subspace(generators: Sequence[HeisElem], n: int, g: int) -> list[ThetaPoly]:
    """Exact basis of the degree-``n`` forms fixed by every generator.

    Each generator sends a monomial to plus or minus a monomial, so the fixed
    space is spanned by signed orbit sums; an orbit that reaches some monomial
    with both signs contributes nothing.
    """
    for x in generators:
        if x.g != g:
            raise GenusMismatch(f"generator of genus {x.g} for genus {g}")
    monomials = monomials_of_degree(g, n)
    tables = [_index_action(x) for x in generators]
    images: list[dict[Monomial, tuple[Fraction, Monomial]]] = [{} for _ in tables]
    seen: set[Monomial] = set()
    basis: list[ThetaPoly] = []
    for root in monomials:
        if root in seen:
            continue
        signs: dict[Monomial, Fraction] = {root: Fraction(1)}
        consistent = True
        queue = deque([root])
        while queue:
            m = queue.popleft()
            for table, cache in zip(tables, images):
                if m not in cache:
                    s, image = act_on_monomial(table, m)
                    if abs(s) != 1:
                        raise ValueError("generators must act by signed permutations of monomials")
                    cache[m] = (s, image)
                s, image = cache[m]
                # fixed vector v satisfies v[image] = s * v[m]
                value = s * signs[m]
                if image in signs:
                    if signs[image] != value:
                        consistent = False
                else:
                    signs[image] = value
                    queue.append(image)
        seen.update(signs)
        if consistent:
            basis.append(ThetaPoly(g, signs))
    return basis


# -- exact linear algebra over Q ------------------------------------------

class RatMatrix:
    """Dense matrix of exact rationals stored by rows."""

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = [[Fraction(x) for x in row] for row in rows]
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def transpose(self) -> RatMatrix:
        return RatMatrix([list(col) for col in zip(*self.rows)] if self.rows else [], self.nrows)

    def vstack(self, other: RatMatrix) -> RatMatrix:
        if self.ncols != other.ncols:
            raise ValueError("column counts differ")
        return RatMatrix(self.rows + other.rows, self.ncols)

    def __matmul__(self, vec: Sequence) -> list[Fraction]:
        return [sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.rows]


def _integer_rows(m: RatMatrix) -> list[list[int]]:
    out = []
    for row in m.rows:
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def rank(m: RatMatrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    a = _integer_rows(m)
    nrows, ncols = m.nrows, m.ncols
    r = 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pr = a[r]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[col]
            p = pr[col]
            for j in range(col + 1, ncols):
                ai[j] = (p * ai[j] - f * pr[j]) // prev
            ai[col] = 0
        prev = pr[col]
        r += 1
        if r == nrows:
            break
    return r


def rref(m: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(row) for row in m.rows]
    pivots: list[int] = []
    r = 0
    for col in range(m.ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    return a[:r], pivots


def kernel_basis(m: RatMatrix) -> list[list[Fraction]]:
    """Right kernel; one vector per free column, with a 1 in that column."""
    reduced, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m.ncols
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def solve(m: RatMatrix, rhs: Sequence) -> list[Fraction] | None:
    """One exact solution of ``m x = rhs`` (free variables zero), or None."""
    augmented = RatMatrix([row + [Fraction(b)] for row, b in zip(m.rows, rhs)], m.ncols + 1)
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    return x


def coefficient_matrix(polys: Sequence[ThetaPoly], monomials: Sequence[Monomial] | None = None) -> tuple[RatMatrix, list[Monomial]]:
    """Rows are polynomials, columns the given (or all occurring) monomials."""
    if monomials is None:
        support: set[Monomial] = set()
        for p in polys:
            support.update(p._terms)
        monomials = sorted(support, key=monomial_key)
    index = {m: i for i, m in enumerate(monomials)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(monomials)
        for m, c in p._terms.items():
            row[index[m]] = c
        rows.append(row)
    return RatMatrix(rows, len(monomials)), list(monomials)


def span_rank(polys: Sequence[ThetaPoly]) -> int:
    if not polys:
        return 0
    return rank(coefficient_matrix(polys)[0])


def same_span(first: Sequence[ThetaPoly], second: Sequence[ThetaPoly]) -> bool:
    r1, r2 = span_rank(first), span_rank(second)
    return r1 == r2 == span_rank(list(first) + list(second))
