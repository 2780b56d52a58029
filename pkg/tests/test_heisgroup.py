from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heisquartic.heisgroup import (
    BitVec,
    GenusMismatch,
    HeisElem,
    TwoTorsionPoint,
    act_on_index,
    all_two_torsion,
    char_eval,
    commutator,
    heis_act_basis,
    heis_mul,
    j2_generators,
    k_generators,
    weil_pairing,
)


def bv(*coords):
    return BitVec.from_tuple(coords)


@st.composite
def elements(draw, g=3):
    scalar = draw(st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(-1, 3)]))
    return HeisElem(scalar, BitVec(draw(st.integers(0, 2**g - 1)), g), BitVec(draw(st.integers(0, 2**g - 1)), g))


def test_char_eval_examples():
    assert char_eval(bv(1, 0), bv(1, 1)) == -1
    assert char_eval(bv(1, 1), bv(1, 1)) == 1
    assert char_eval(bv(0, 0), bv(1, 1)) == 1


def test_bitvec_round_trip_and_validation():
    assert bv(1, 0, 1).bits == 0b101
    assert bv(1, 0, 1).to_tuple() == (1, 0, 1)
    with pytest.raises(ValueError):
        BitVec(4, 2)
    with pytest.raises(GenusMismatch):
        bv(1, 0) + bv(1, 0, 0)


def test_mul_example():
    x = HeisElem(1, bv(1, 0), bv(0, 0))
    y = HeisElem(1, bv(0, 1), bv(1, 0))
    z = heis_mul(x, y)
    assert z.scalar == -1
    assert z.a == bv(1, 1)
    assert z.chi == bv(1, 0)


@given(elements(), elements(), elements())
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(elements())
def test_inverse(x):
    assert x * x.inverse() == HeisElem.identity(3)
    assert x.inverse() * x == HeisElem.identity(3)


@given(elements(), elements())
def test_commutator_is_central_scalar(x, y):
    c = commutator(x, y)
    assert not c.a and not c.chi
    assert c.scalar in (1, -1)


@pytest.mark.parametrize("g", [2, 3])
def test_weil_pairing_is_commutator(g):
    for p in all_two_torsion(g):
        for q in all_two_torsion(g):
            assert commutator(p.lift(), q.lift()).scalar == weil_pairing(p, q)


def test_weil_pairing_bilinear_alternating():
    points = list(all_two_torsion(2))
    for p in points:
        assert weil_pairing(p, p) == 1
        for q in points:
            for r in points:
                assert weil_pairing(p + q, r) == weil_pairing(p, r) * weil_pairing(q, r)


def test_k_is_isotropic():
    for x in k_generators(3):
        for y in k_generators(3):
            assert commutator(x, y) == HeisElem.identity(3)


@given(elements(), elements(), st.integers(0, 7))
def test_action_is_a_group_action(x, y, b):
    s1, t1 = act_on_index(y, b)
    s2, t2 = act_on_index(x, t1)
    s, t = act_on_index(x * y, b)
    assert (s, t) == (s1 * s2, t2)


def test_basis_action_formula():
    x = HeisElem(2, bv(1, 0), bv(0, 1))
    coeff, target = heis_act_basis(x, bv(0, 1))
    assert target == bv(1, 1)
    assert coeff == -2


def test_j2_generators_count():
    assert len(j2_generators(4)) == 8
    assert all(t.in_k() == (not t.a) for t in [TwoTorsionPoint(bv(0, 1), bv(1, 0))])
