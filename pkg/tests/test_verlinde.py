from __future__ import annotations

import pytest

from heisquartic.verlinde import (
    IntegralityError,
    dims_summary,
    even_theta_dim,
    invariant_quartic_count,
    sym_power_dim,
    verlinde_su2,
)


def test_known_values():
    assert verlinde_su2(4, 3) == 800
    assert verlinde_su2(2, 2) == 10


@pytest.mark.parametrize("g", range(2, 11))
def test_level_one(g):
    assert verlinde_su2(g, 1) == 2**g


def test_level_two_genus_two_matches_sym2():
    # H^0(SU_C(2), L^2) for g = 2 is S^2 of the 4-dimensional theta space
    assert verlinde_su2(2, 2) == sym_power_dim(2, 2)


def test_large_level_is_integral():
    assert verlinde_su2(6, 40) > 0


def test_counts():
    assert invariant_quartic_count(4) == 41
    assert even_theta_dim(3, 6) == 112
    assert sym_power_dim(4, 3) - verlinde_su2(4, 3) == 16


def test_dims_summary_keys():
    assert dims_summary(4) == {
        "symCube": 816,
        "verlinde3": 800,
        "kInvCubics": 51,
        "invariantQuartics": 41,
        "evenTheta6": 656,
    }


def test_bad_arguments():
    with pytest.raises(ValueError):
        verlinde_su2(1, 2)
    with pytest.raises(ValueError):
        even_theta_dim(3, 5)


def test_integrality_error_type():
    assert issubclass(IntegralityError, ArithmeticError)
