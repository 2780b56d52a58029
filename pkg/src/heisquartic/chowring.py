"""Truncated cohomology rings of the Jacobian and of symmetric products.

``JacClass`` lives in Q[theta]/(theta^(g+1)) with the integral of theta^g equal
to g!.  ``SymClass`` is the subring of H*(S^d C) generated by the point class
``eta`` and ``s = sigma_1 + ... + sigma_g``.  Its top-degree monomials
integrate as ``s^a eta^(d-a) -> a! C(g, a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence


class ClosedFormMismatch(ArithmeticError):
    """A ring computation disagreed with a closed-form expression."""


def _fractions(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class JacClass:
    g: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        c = _fractions(self.coeffs)[: self.g + 1]
        c = c + (Fraction(0),) * (self.g + 1 - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, g: int, c) -> JacClass:
        return cls(g, (c,))

    @classmethod
    def theta_power(cls, g: int, k: int, c=1) -> JacClass:
        return cls(g, (0,) * k + (c,))

    def _check(self, other: JacClass) -> None:
        if self.g != other.g:
            raise ValueError(f"classes of genus {self.g} and {other.g}")

    def __add__(self, other: JacClass) -> JacClass:
        self._check(other)
        return JacClass(self.g, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> JacClass:
        return JacClass(self.g, tuple(-a for a in self.coeffs))

    def __sub__(self, other: JacClass) -> JacClass:
        return self + (-other)

    def __mul__(self, other) -> JacClass:
        if isinstance(other, JacClass):
            self._check(other)
            out = [Fraction(0)] * (self.g + 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j in range(self.g + 1 - i):
                        out[i + j] += a * other.coeffs[j]
            return JacClass(self.g, tuple(out))
        return JacClass(self.g, tuple(a * Fraction(other) for a in self.coeffs))

    __rmul__ = __mul__

    def degree_part(self, k: int) -> Fraction:
        return self.coeffs[k]

    def integral(self) -> Fraction:
        return self.coeffs[self.g] * factorial(self.g)

    def inverse(self) -> JacClass:
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("class with zero constant term is not a unit")
        out = [1 / c0]
        for n in range(1, self.g + 1):
            out.append(-sum(self.coeffs[k] * out[n - k] for k in range(1, n + 1)) / c0)
        return JacClass(self.g, tuple(out))

    def exp(self) -> JacClass:
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a nilpotent class")
        result = JacClass.constant(self.g, 1)
        term = JacClass.constant(self.g, 1)
        for n in range(1, self.g + 1):
            term = term * self * Fraction(1, n)
            result = result + term
        return result

    def log(self) -> JacClass:
        """Logarithm of a class with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        x = self - JacClass.constant(self.g, 1)
        result = JacClass.constant(self.g, 0)
        power = JacClass.constant(self.g, 1)
        for n in range(1, self.g + 1):
            power = power * x
            result = result + power * Fraction((-1) ** (n - 1), n)
        return result


def jac_chern_character_Q1(g: int) -> JacClass:
    """(g + 1 - 4 theta) e^(2 theta), truncated at theta^g."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    e2 = JacClass(g, tuple(Fraction(2**k, factorial(k)) for k in range(g + 1)))
    return JacClass(g, (g + 1, -4)) * e2


def power_sums(ch: JacClass) -> list[JacClass]:
    """p_n = n! ch_n for n = 1..g (index 0 unused)."""
    g = ch.g
    return [None] + [JacClass.theta_power(g, n, ch.coeffs[n] * factorial(n)) for n in range(1, g + 1)]


def newton_chern(p: Sequence[JacClass | None]) -> list[JacClass]:
    """Chern classes c_0..c_g from power sums p_1..p_g.

    ``p`` is indexed from 1 (``p[0]`` is ignored).
    """
    g = p[1].g
    c = [JacClass.constant(g, 1)]
    for n in range(1, g + 1):
        acc = JacClass.constant(g, 0)
        for i in range(1, n + 1):
            acc = acc + c[n - i] * p[i] * ((-1) ** (i - 1))
        c.append(acc * Fraction(1, n))
    return c


def total_chern(c: Sequence[JacClass]) -> JacClass:
    total = c[0]
    for ck in c[1:]:
        total = total + ck
    return total


def chern_from_character_by_log(ch: JacClass) -> JacClass:
    """Total Chern class as exp(sum (-1)^(n-1) (n-1)! ch_n)."""
    g = ch.g
    log_c = JacClass(g, (0,) + tuple((-1) ** (n - 1) * factorial(n - 1) * ch.coeffs[n] for n in range(1, g + 1)))
    return log_c.exp()


def top_chern_Q1(g: int) -> int:
    if not 2 <= g <= 12:
        raise ValueError("genus must lie in [2, 12]")
    c = newton_chern(power_sums(jac_chern_character_Q1(g)))
    value = c[g].integral()
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral top Chern number {value}")
    return int(value)


def top_chern_Q1_by_log(g: int) -> int:
    value = chern_from_character_by_log(jac_chern_character_Q1(g)).integral()
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral top Chern number {value}")
    return int(value)


def chern_table(gmin: int = 3, gmax: int = 8) -> list[tuple[int, int]]:
    return [(g, top_chern_Q1(g)) for g in range(gmin, gmax + 1)]


def segre_equals_chern(g: int, chern_character: JacClass | None = None) -> bool:
    """Check s(N) = c(Q) for 0 -> N -> O^(2^g) -> Q -> 0.

    The Chern class of N is computed from its own character 2^g - ch(Q) by
    Newton's identities, then inverted; the result is compared with c(Q),
    computed separately, in every degree and at the top.
    """
    ch_q = chern_character if chern_character is not None else jac_chern_character_Q1(g)
    ch_n = JacClass.constant(g, 2**g) - ch_q
    if all(v == 0 for v in ch_q.coeffs[1:]):
        c_q = JacClass.constant(g, 1)
        c_n = JacClass.constant(g, 1)
    else:
        c_q = total_chern(newton_chern(power_sums(ch_q)))
        c_n = total_chern(newton_chern(power_sums(ch_n)))
    segre = c_n.inverse()
    return segre == c_q and segre.integral() == c_q.integral()


def rank_identity_holds(g: int, d: int) -> bool:
    q = sum(comb(g, i) for i in range(d + 1))
    n = sum(comb(g, i) for i in range(d + 1, g + 1))
    return q + n == 2**g


# -- symmetric products -----------------------------------------------------

@dataclass(frozen=True)
class SymClass:
    """Polynomial in ``s`` and ``eta`` inside H*(S^d C).

    ``terms`` maps ``(a, b)`` to the coefficient of ``s^a eta^b``.  Products
    are plain polynomial products truncated at total degree d and at
    ``s^(g+1) = 0``.  Mixed monomials are only reduced when integrating.
    """

    g: int
    d: int
    terms: dict

    def __post_init__(self) -> None:
        clean = {}
        for (a, b), c in dict(self.terms).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in s^{a} eta^{b}")
            c = Fraction(c)
            if c and a <= self.g and a + b <= self.d:
                clean[(a, b)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, g: int, d: int) -> SymClass:
        return cls(g, d, {})

    @classmethod
    def one(cls, g: int, d: int) -> SymClass:
        return cls(g, d, {(0, 0): 1})

    @classmethod
    def eta(cls, g: int, d: int, power: int = 1, c=1) -> SymClass:
        return cls(g, d, {(0, power): c})

    @classmethod
    def s(cls, g: int, d: int, power: int = 1, c=1) -> SymClass:
        return cls(g, d, {(power, 0): c})

    def _check(self, other: SymClass) -> None:
        if (self.g, self.d) != (other.g, other.d):
            raise ValueError("classes on different symmetric products")

    def coefficient(self, a: int, b: int) -> Fraction:
        return self.terms.get((a, b), Fraction(0))

    def __add__(self, other: SymClass) -> SymClass:
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return SymClass(self.g, self.d, out)

    def __neg__(self) -> SymClass:
        return self * -1

    def __sub__(self, other: SymClass) -> SymClass:
        return self + (-other)

    def __mul__(self, other) -> SymClass:
        if not isinstance(other, SymClass):
            c = Fraction(other)
            return SymClass(self.g, self.d, {k: v * c for k, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                a, b = a1 + a2, b1 + b2
                if a <= self.g and a + b <= self.d:
                    out[(a, b)] = out.get((a, b), 0) + c1 * c2
        return SymClass(self.g, self.d, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> SymClass:
        result = SymClass.one(self.g, self.d)
        for _ in range(n):
            result = result * self
        return result

    def degree_part(self, k: int) -> SymClass:
        return SymClass(self.g, self.d, {key: c for key, c in self.terms.items() if sum(key) == k})


def point_class_integral(g: int, d: int, a: int) -> int:
    """Integral of s^a eta^(d-a) over S^d C: a! C(g, a)."""
    if not 0 <= a <= d:
        raise ValueError(f"need 0 <= a <= d, got a={a}, d={d}")
    return factorial(a) * comb(g, a)


def sym_integrate(c: SymClass) -> Fraction:
    total = Fraction(0)
    for (a, b), coeff in c.terms.items():
        if a + b == c.d:
            total += coeff * point_class_integral(c.g, c.d, a)
    return total


def _check_gd(g: int, d: int) -> None:
    if not 1 <= d <= g:
        raise ValueError(f"need 1 <= d <= g, got g={g}, d={d}")


def c1_sym_power(g: int, d: int, deg_l: int) -> SymClass:
    """c_1(S^d L) = (deg L) eta."""
    return SymClass.eta(g, d, 1, deg_l)


def c1_diagonal(g: int, d: int) -> SymClass:
    _check_gd(g, d)
    return SymClass.eta(g, d, 1, 2 * (d + g - 1)) - SymClass.s(g, d, 1, 2)


def c1_Lx(g: int, d: int) -> SymClass:
    """c_1 of L_x = S^d(K x^2)(-diagonal); always 2s."""
    _check_gd(g, d)
    c1 = c1_sym_power(g, d, 2 * g - 2 + 2 * d) - c1_diagonal(g, d)
    if c1 != SymClass.s(g, d, 1, 2):
        raise ArithmeticError(f"c1(L_x) = {c1} is not 2s")
    return c1


def eta_power_series(g: int, d: int, exponent: int) -> SymClass:
    """(1 + eta)^exponent for any integer exponent (eta is nilpotent)."""
    coeffs = [Fraction(1)]
    for k in range(1, d + 1):
        coeffs.append(coeffs[-1] * (exponent - k + 1) / k)
    return SymClass(g, d, {(0, k): c for k, c in enumerate(coeffs)})


def total_chern_sym(g: int, d: int) -> SymClass:
    """c(S^d C) = (1+eta)^(d-2g+1) prod_i (1 + eta - sigma_i).

    With sigma_i^2 = 0 the product is sum_k (-1)^k e_k (1+eta)^(g-k) and
    e_k = s^k / k!.
    """
    _check_gd(g, d)
    total = SymClass.zero(g, d)
    for k in range(0, min(d, g) + 1):
        e_k = SymClass.s(g, d, k, Fraction((-1) ** k, factorial(k)))
        total = total + e_k * eta_power_series(g, d, d - 2 * g + 1 + g - k)
    return total


def canonical_class_sym(g: int, d: int) -> SymClass:
    return -total_chern_sym(g, d).degree_part(1)


def self_intersection_closed_form(g: int, d: int) -> int:
    return factorial(g) // factorial(g - d) + (d + 1) ** d - g**d


def ample_self_intersection(g: int, d: int, check_closed_form: bool = False) -> int:
    """Integral of c_1(L_x K^{-1})^d over S^d C.

    ``check_closed_form`` raises :class:`ClosedFormMismatch` when the ring
    value differs from ``g!/(g-d)! + (d+1)^d - g^d``; the two agree for
    d in {1, 2, g-1} but not in general.
    """
    _check_gd(g, d)
    c1 = c1_Lx(g, d) - canonical_class_sym(g, d)
    expected = SymClass.s(g, d) - SymClass.eta(g, d, 1, g - d - 1)
    if c1 != expected:
        raise ArithmeticError(f"c1(L_x K^-1) = {c1}, expected s - (g-d-1) eta")
    value = sym_integrate(c1**d)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral intersection number {value}")
    value = int(value)
    if check_closed_form:
        closed = self_intersection_closed_form(g, d)
        if value != closed:
            raise ClosedFormMismatch(f"g={g}, d={d}: ring gives {value}, closed form gives {closed}")
    return value
