"""Rank-2 Verlinde numbers and the dimension counts attached to them."""

from __future__ import annotations

import math

import mpmath

from .invariants import k_invariant_cubic_dimension


class IntegralityError(ArithmeticError):
    """The Verlinde sum did not round cleanly to an integer."""


def _verlinde_sum(g: int, k: int, bits: int) -> mpmath.mpf:
    with mpmath.workprec(bits):
        n = k + 2
        total = mpmath.fsum(mpmath.sin(j * mpmath.pi / n) ** (2 - 2 * g) for j in range(1, k + 2))
        return (mpmath.mpf(n) / 2) ** (g - 1) * total


def verlinde_su2(g: int, k: int) -> int:
    """dim H^0(SU_C(2), L^k) for a curve of genus ``g``.

    The trigonometric sum is evaluated in multiprecision and rounded; a
    residual above 2^-32 triggers one retry at doubled precision, then an
    :class:`IntegralityError`.
    """
    if g < 2 or not 1 <= k <= 64:
        raise ValueError(f"need g >= 2 and 1 <= k <= 64, got g={g}, k={k}")
    bits = 64 + math.ceil(8 * g * math.log2(k + 2))
    for precision in (bits, 2 * bits):
        value = _verlinde_sum(g, k, precision)
        with mpmath.workprec(precision):
            nearest = int(mpmath.nint(value))
            residual = abs(value - nearest)
        if residual < mpmath.mpf(2) ** -32:
            if nearest <= 0:
                raise IntegralityError(f"non-positive Verlinde number {nearest}")
            return nearest
    raise IntegralityError(f"Verlinde sum for g={g}, k={k} not integral (residual {residual})")


def sym_power_dim(g: int, n: int) -> int:
    """dim S^n of the 2^g-dimensional space of second-order theta functions."""
    return math.comb(2**g + n - 1, n)


def invariant_quartic_count(g: int) -> int:
    """Dimension (3^g + 1)/2 of the J[2]-invariant part of H^0(SU_C(2), L^4)."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    return (3**g + 1) // 2


def even_theta_dim(g: int, n: int) -> int:
    """dim H^0_+(J, n Theta) = n^g/2 + 2^(g-1) for even n."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and at least 2, got {n}")
    return n**g // 2 + 2 ** (g - 1)


def dims_summary(g: int) -> dict[str, int]:
    return {
        "symCube": sym_power_dim(g, 3),
        "verlinde3": verlinde_su2(g, 3),
        "kInvCubics": k_invariant_cubic_dimension(g),
        "invariantQuartics": invariant_quartic_count(g),
        "evenTheta6": even_theta_dim(g, 6),
    }
