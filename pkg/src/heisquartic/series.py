"""Truncated power series over Q and the Euler characteristics on S^d C.

A :class:`Series` knows its truncation order: coefficients of degree above
``order`` are unknown.  Division cancels common powers of the variable first
and gives up the corresponding top orders, so dividing by ``1 - e^(-x)`` is
allowed and honest about precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import comb, factorial


@dataclass(frozen=True)
class Series:
    coeffs: tuple[Fraction, ...]
    order: int

    def __post_init__(self) -> None:
        c = tuple(Fraction(x) for x in self.coeffs[: self.order + 1])
        c = c + (Fraction(0),) * (self.order + 1 - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, c, order: int) -> Series:
        return cls((c,), order)

    @classmethod
    def variable(cls, order: int) -> Series:
        return cls((0, 1), order)

    @classmethod
    def exp_linear(cls, a, order: int) -> Series:
        """e^(a x)."""
        a = Fraction(a)
        return cls(tuple(a**k / factorial(k) for k in range(order + 1)), order)

    def __getitem__(self, k: int) -> Fraction:
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation order {self.order}")
        return self.coeffs[k]

    def valuation(self) -> int | None:
        return next((k for k, c in enumerate(self.coeffs) if c), None)

    def _lift(self, other) -> Series:
        if isinstance(other, Series):
            return other
        return Series.constant(other, self.order)

    def __add__(self, other) -> Series:
        other = self._lift(other)
        n = min(self.order, other.order)
        return Series(tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)), n)

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series(tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other) -> Series:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Series:
        return self._lift(other) - self

    def __mul__(self, other) -> Series:
        if not isinstance(other, Series):
            c = Fraction(other)
            return Series(tuple(x * c for x in self.coeffs), self.order)
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return Series(tuple(out), n)

    __rmul__ = __mul__

    def shift_down(self, k: int) -> Series:
        """Divide by x^k; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ZeroDivisionError(f"series not divisible by x^{k}")
        return Series(self.coeffs[k:], self.order - k)

    def inverse(self) -> Series:
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        out = [1 / c0]
        for n in range(1, self.order + 1):
            out.append(-sum(self.coeffs[k] * out[n - k] for k in range(1, n + 1)) / c0)
        return Series(tuple(out), self.order)

    def __truediv__(self, other) -> Series:
        if not isinstance(other, Series):
            return self * (1 / Fraction(other))
        v = other.valuation()
        if v is None:
            raise ZeroDivisionError("division by the zero series")
        return self.shift_down(v) * other.shift_down(v).inverse()

    def __pow__(self, n: int) -> Series:
        base = self if n >= 0 else self.inverse()
        result = Series.constant(1, self.order)
        for _ in range(abs(n)):
            result = result * base
        return result

    def compose(self, inner: Series) -> Series:
        """self(inner(x)); ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        result = Series.constant(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            result = result * inner + self.coeffs[k]
        return result

    def exp(self) -> Series:
        if self.coeffs[0] != 0:
            raise ValueError("exp needs zero constant term")
        return Series.exp_linear(1, self.order).compose(self)

    def log1p(self) -> Series:
        """log(1 + self) for a series with zero constant term."""
        if self.coeffs[0] != 0:
            raise ValueError("log1p needs zero constant term")
        n = self.order
        log_series = Series((0,) + tuple(Fraction((-1) ** (k - 1), k) for k in range(1, n + 1)), n)
        return log_series.compose(self)

    def truncate(self, order: int) -> Series:
        return Series(self.coeffs, min(order, self.order))


@lru_cache(maxsize=None)
def todd_factor(order: int) -> Series:
    """x / (1 - e^(-x))."""
    x = Series.variable(order)
    return x / (1 - Series.exp_linear(-1, order))


@lru_cache(maxsize=None)
def tau_series(order: int) -> Series:
    """(x e^(-x) + e^(-x) - 1) / (x (1 - e^(-x)))."""
    x = Series.variable(order)
    em = Series.exp_linear(-1, order)
    return (x * em + em - 1) / (x * (1 - em))


def _working_order(d: int) -> int:
    return d + 2


def _integer(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise ArithmeticError(f"{what} is not an integer: {value}")
    return int(value)


def _check(g: int, d: int) -> None:
    if not 1 <= d <= g <= 12:
        raise ValueError(f"need 1 <= d <= g <= 12, got g={g}, d={d}")


def euler_char_substitution(g: int, d: int) -> int:
    """Coefficient of x^d in (x/(1-e^-x))^(d+1) (2 - e^-x)^g."""
    _check(g, d)
    n = _working_order(d)
    value = (todd_factor(n) ** (d + 1) * (2 - Series.exp_linear(-1, n)) ** g)[d]
    return _integer(value, "Euler characteristic")


def euler_char_todd(g: int, d: int) -> int:
    """Same number from the uncombined Todd form (x/(1-e^-x))^(d-g+1) (1 + x(2 + tau))^g."""
    _check(g, d)
    n = _working_order(d)
    x = Series.variable(n)
    tau = tau_series(n)
    value = (todd_factor(n) ** (d - g + 1) * (1 + x * (2 + tau)) ** g)[d]
    return _integer(value, "Euler characteristic")


def euler_char_residue(g: int, d: int) -> int:
    """Residue of (1+z)^g dz / (z^(d+1) (1-z)), i.e. the z^d coefficient of (1+z)^g/(1-z)."""
    if not 0 <= d <= g:
        raise ValueError(f"need 0 <= d <= g, got g={g}, d={d}")
    n = d + 2
    z = Series.variable(n)
    value = ((1 + z) ** g / (1 - z))[d]
    return _integer(value, "residue")


def euler_char_binomial(g: int, d: int) -> int:
    return sum(comb(g, i) for i in range(d + 1))


def euler_char_twisted_series(g: int, d: int) -> int:
    """Twisting by -p multiplies the Chern character by e^(-x)."""
    _check(g, d)
    n = _working_order(d)
    em = Series.exp_linear(-1, n)
    value = (todd_factor(n) ** (d + 1) * (2 - em) ** g * em)[d]
    return _integer(value, "twisted Euler characteristic")


def euler_char_twisted(g: int, d: int) -> int:
    """chi(S^d C, L_x(-p)); the series route is cross-checked against C(g, d)."""
    if d == 0:
        return 1
    value = euler_char_twisted_series(g, d)
    if value != comb(g, d):
        raise ArithmeticError(f"twisted Euler characteristic {value} != C({g},{d})")
    return value


def euler_routes(g: int, d: int) -> dict[str, int]:
    return {
        "sub": euler_char_substitution(g, d),
        "todd": euler_char_todd(g, d),
        "res": euler_char_residue(g, d),
        "binom": euler_char_binomial(g, d),
    }


def rank_formulas(g: int, d: int) -> tuple[int, int]:
    """(rank Q_d, rank N_d)."""
    if not 0 <= d <= g - 1:
        raise ValueError(f"need 0 <= d <= g-1, got g={g}, d={d}")
    q = euler_char_binomial(g, d)
    return q, 2**g - q


def polarity_defect(g: int, d: int) -> int:
    if not 0 <= d <= g - 1:
        raise ValueError(f"need 0 <= d <= g-1, got g={g}, d={d}")
    return 2 ** (g - 1) - euler_char_binomial(g, d)


# -- first-order jets: f0 + sigma f1 with sigma^2 = 0 -----------------------

@dataclass(frozen=True)
class Jet:
    value: Series
    slope: Series

    def __add__(self, other: Jet) -> Jet:
        return Jet(self.value + other.value, self.slope + other.slope)

    def __sub__(self, other: Jet) -> Jet:
        return Jet(self.value - other.value, self.slope - other.slope)

    def __mul__(self, other: Jet) -> Jet:
        return Jet(self.value * other.value, self.value * other.slope + self.slope * other.value)

    def __truediv__(self, other: Jet) -> Jet:
        value = self.value / other.value
        slope = (self.slope * other.value - self.value * other.slope) / (other.value * other.value)
        return Jet(value, slope)


def tau_jet_identity(order: int = 8) -> bool:
    """(x - sigma)/(1 - e^-(x - sigma)) == (x/(1-e^-x)) (1 + sigma tau) with sigma^2 = 0."""
    n = order + 4
    x = Series.variable(n)
    zero = Series.constant(0, n)
    one = Series.constant(1, n)
    em = Series.exp_linear(-1, n)
    numerator = Jet(x, -one)
    # e^-(x - sigma) = e^-x (1 + sigma)
    denominator = Jet(one, zero) - Jet(em, em)
    lhs = numerator / denominator
    f = todd_factor(n)
    rhs = Jet(f, f * tau_series(n))
    k = min(lhs.value.order, lhs.slope.order, rhs.value.order, rhs.slope.order, order)
    return lhs.value.truncate(k) == rhs.value.truncate(k) and lhs.slope.truncate(k) == rhs.slope.truncate(k)
