"""Level-2 finite Heisenberg group and its action on the theta basis.

Vectors of F_2^g are stored as integer bitmasks; bit ``i`` of the mask is
coordinate ``i``.  A character of F_2^g is coded by a vector ``c`` through
``chi_c(a) = (-1)^(c . a)``.

The group law on triples ``(s, a, chi)`` is

    (s, a, chi) (t, b, gamma) = (s t gamma(a), a + b, chi gamma)

and an element acts on the basis ``{X_b}`` by ``X_b -> s chi(a + b) X_{a+b}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

MAX_GENUS = 16


class GenusMismatch(ValueError):
    """Raised when two objects of different genus are combined."""


def _check_same(g: int, h: int) -> None:
    if g != h:
        raise GenusMismatch(f"genus {g} combined with genus {h}")


def parity(n: int) -> int:
    return n.bit_count() & 1


@dataclass(frozen=True, order=True)
class BitVec:
    """An element of F_2^g."""

    bits: int
    g: int

    def __post_init__(self) -> None:
        if not 1 <= self.g <= MAX_GENUS:
            raise ValueError(f"genus must lie in [1, {MAX_GENUS}], got {self.g}")
        if not 0 <= self.bits < (1 << self.g):
            raise ValueError(f"bitmask {self.bits} out of range for g={self.g}")

    @classmethod
    def from_tuple(cls, coords: tuple[int, ...] | list[int]) -> BitVec:
        bits = 0
        for i, c in enumerate(coords):
            if c not in (0, 1):
                raise ValueError(f"coordinate {c} is not a bit")
            bits |= c << i
        return cls(bits, len(coords))

    @classmethod
    def zero(cls, g: int) -> BitVec:
        return cls(0, g)

    def to_tuple(self) -> tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.g))

    def __add__(self, other: BitVec) -> BitVec:
        _check_same(self.g, other.g)
        return BitVec(self.bits ^ other.bits, self.g)

    __xor__ = __add__

    def dot(self, other: BitVec) -> int:
        _check_same(self.g, other.g)
        return parity(self.bits & other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0


def all_vectors(g: int) -> Iterator[BitVec]:
    for bits in range(1 << g):
        yield BitVec(bits, g)


def char_eval(chi: BitVec, a: BitVec) -> int:
    """Value (+1 or -1) of the character coded by ``chi`` at ``a``."""
    return -1 if chi.dot(a) else 1


@dataclass(frozen=True)
class HeisElem:
    scalar: Fraction
    a: BitVec
    chi: BitVec

    def __post_init__(self) -> None:
        _check_same(self.a.g, self.chi.g)
        object.__setattr__(self, "scalar", Fraction(self.scalar))
        if self.scalar == 0:
            raise ValueError("Heisenberg scalar must be nonzero")

    @property
    def g(self) -> int:
        return self.a.g

    @classmethod
    def identity(cls, g: int) -> HeisElem:
        return cls(Fraction(1), BitVec.zero(g), BitVec.zero(g))

    @classmethod
    def lift(cls, a: BitVec, chi: BitVec) -> HeisElem:
        """The scalar-one lift ``(1, a, chi)`` of a two-torsion point."""
        return cls(Fraction(1), a, chi)

    def __mul__(self, other: HeisElem) -> HeisElem:
        return heis_mul(self, other)

    def inverse(self) -> HeisElem:
        return HeisElem(char_eval(self.chi, self.a) / self.scalar, self.a, self.chi)

    def __repr__(self) -> str:
        return f"HeisElem({self.scalar}, a={self.a.bits:#b}, chi={self.chi.bits:#b}; g={self.g})"


def heis_mul(x: HeisElem, y: HeisElem) -> HeisElem:
    _check_same(x.g, y.g)
    return HeisElem(x.scalar * y.scalar * char_eval(y.chi, x.a), x.a + y.a, x.chi + y.chi)


def commutator(x: HeisElem, y: HeisElem) -> HeisElem:
    return x * y * x.inverse() * y.inverse()


def heis_act_basis(x: HeisElem, b: BitVec) -> tuple[Fraction, BitVec]:
    """Image of ``X_b`` under ``x`` as ``(coefficient, index)``."""
    _check_same(x.g, b.g)
    target = x.a + b
    return x.scalar * char_eval(x.chi, target), target


def act_on_index(x: HeisElem, b: int) -> tuple[Fraction, int]:
    """Bitmask version of :func:`heis_act_basis` for inner loops."""
    target = x.a.bits ^ b
    sign = -1 if parity(x.chi.bits & target) else 1
    return x.scalar * sign, target


@dataclass(frozen=True)
class TwoTorsionPoint:
    """A point of J[2] written as a pair in F_2^g x Hom(F_2^g, C*)."""

    a: BitVec
    chi: BitVec

    def __post_init__(self) -> None:
        _check_same(self.a.g, self.chi.g)

    @property
    def g(self) -> int:
        return self.a.g

    def __add__(self, other: TwoTorsionPoint) -> TwoTorsionPoint:
        return TwoTorsionPoint(self.a + other.a, self.chi + other.chi)

    def lift(self) -> HeisElem:
        return HeisElem.lift(self.a, self.chi)

    def in_k(self) -> bool:
        return not self.a


def weil_pairing(p: TwoTorsionPoint, q: TwoTorsionPoint) -> int:
    _check_same(p.g, q.g)
    return char_eval(p.chi, q.a) * char_eval(q.chi, p.a)


def all_two_torsion(g: int) -> Iterator[TwoTorsionPoint]:
    for a in all_vectors(g):
        for chi in all_vectors(g):
            yield TwoTorsionPoint(a, chi)


def k_generators(g: int) -> list[HeisElem]:
    """Generators ``(1, 0, e_i)`` of the level subgroup K."""
    zero = BitVec.zero(g)
    return [HeisElem.lift(zero, BitVec(1 << i, g)) for i in range(g)]


def khat_generators(g: int) -> list[HeisElem]:
    """Generators ``(1, e_i, 0)`` of the complementary level subgroup."""
    zero = BitVec.zero(g)
    return [HeisElem.lift(BitVec(1 << i, g), zero) for i in range(g)]


def j2_generators(g: int) -> list[HeisElem]:
    """Scalar-one lifts generating the action of all of J[2]."""
    return khat_generators(g) + k_generators(g)
