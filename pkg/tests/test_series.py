from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heisquartic.series import (
    Series,
    euler_char_binomial,
    euler_char_residue,
    euler_char_substitution,
    euler_char_todd,
    euler_char_twisted,
    euler_routes,
    polarity_defect,
    rank_formulas,
    tau_jet_identity,
    tau_series,
    todd_factor,
)

N = 6
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
series_st = st.lists(coeff, min_size=N + 1, max_size=N + 1).map(lambda c: Series(tuple(c), N))
units = series_st.filter(lambda s: s[0] != 0)
nilpotent = series_st.map(lambda s: s - s[0])


@pytest.mark.parametrize("g", range(1, 13))
def test_all_routes_agree(g):
    for d in range(1, g + 1):
        routes = euler_routes(g, d)
        assert set(routes.values()) == {sum(comb(g, i) for i in range(d + 1))}, routes


def test_spot_value():
    assert euler_char_substitution(4, 2) == 11
    assert euler_char_residue(4, 0) == 1


@pytest.mark.parametrize("g,d,value", [(4, 2, 6), (8, 3, 56), (5, 5, 1), (3, 1, 3)])
def test_twisted(g, d, value):
    assert euler_char_twisted(g, d) == value


def test_twisted_degree_zero():
    assert euler_char_twisted(5, 0) == 1


def test_rank_formulas():
    assert rank_formulas(4, 1) == (5, 11)
    assert rank_formulas(4, 0) == (1, 15)


def test_polarity_defect():
    assert polarity_defect(4, 2) == -3
    assert polarity_defect(4, 1) == 3
    for g in range(1, 10):
        for d in range(g):
            assert polarity_defect(g, d) == -polarity_defect(g, g - 1 - d)


def test_bad_ranges():
    with pytest.raises(ValueError):
        euler_char_substitution(3, 4)
    with pytest.raises(ValueError):
        rank_formulas(3, 3)


@given(series_st, series_st, series_st)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(units)
def test_inverse(a):
    assert a * a.inverse() == Series.constant(1, N)


@given(nilpotent)
def test_exp_log(a):
    assert a.exp().__sub__(1).log1p() == a


@given(nilpotent, nilpotent)
def test_exp_is_homomorphism(a, b):
    assert (a + b).exp() == a.exp() * b.exp()


def test_division_cancels_valuation():
    x = Series.variable(5)
    q = (x * x) / x
    assert q.order == 4
    assert q == Series.variable(4)


def test_todd_coefficients():
    t = todd_factor(4)
    assert [t[k] for k in range(4)] == [1, Fraction(1, 2), Fraction(1, 12), 0]


def test_tau_coefficients():
    t = tau_series(5)
    assert [t[k] for k in range(4)] == [Fraction(-1, 2), Fraction(1, 12), 0, Fraction(-1, 720)]


def test_tau_jet_identity():
    assert tau_jet_identity(8)


def test_todd_route_alone():
    assert euler_char_todd(6, 3) == euler_char_binomial(6, 3)
