from __future__ import annotations

import json

import pytest

from heisquartic.heisgroup import BitVec, HeisElem, j2_generators, k_generators
from heisquartic.invariants import (
    QuarticLabel,
    combined_restriction_is_injective,
    eigenspace_basis,
    invariant_quartic_dimension,
    k_invariant_cubic_dimension,
    k_invariant_cubics,
    minus_restriction_vanishes,
    quartic_basis,
    quartic_from_cubic,
    quartic_labels,
    restrict_to_eigenspace,
)
from heisquartic.polyalg import ThetaPoly, heis_act_poly, partial_derivative, same_span, span_rank


@pytest.mark.parametrize("g,expected", [(2, 5), (3, 15), (4, 51), (5, 187)])
def test_quartic_counts(g, expected):
    assert invariant_quartic_dimension(g) == expected
    assert len(quartic_labels(g)) == expected
    assert len(quartic_basis(g)) == expected


@pytest.mark.parametrize("g,expected", [(2, 5), (3, 15), (4, 51)])
def test_k_cubic_counts(g, expected):
    assert k_invariant_cubic_dimension(g) == expected
    assert len(k_invariant_cubics(g)) == expected


@pytest.mark.parametrize("g", [2, 3, 4])
def test_quartics_are_invariant_and_independent(g):
    polys = [q for _, q in quartic_basis(g)]
    assert span_rank(polys) == len(polys)
    for q in polys:
        for x in j2_generators(g):
            assert heis_act_poly(x, q) == q


def test_g2_basis_literal_sums():
    basis = dict((label.kind + str(label.data), q) for label, q in quartic_basis(2))
    assert basis["Q0()"] == sum((ThetaPoly.monomial(2, [s] * 4) for s in range(1, 4)), ThetaPoly.monomial(2, [0] * 4))
    assert basis["QLam(1, 2, 3)"] == ThetaPoly.monomial(2, [0, 1, 2, 3], 4)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_derivative_round_trip_and_partials(g):
    for _, q in quartic_basis(g):
        d0 = partial_derivative(q, 0)
        assert quartic_from_cubic(d0) == q
        for sigma in range(1 << g):
            shift = HeisElem.lift(BitVec(sigma, g), BitVec.zero(g))
            assert partial_derivative(q, sigma) == heis_act_poly(shift, d0)


@pytest.mark.parametrize("g", [3, 4])
def test_d0_image_spans_k_cubics(g):
    images = [partial_derivative(q, 0) for _, q in quartic_basis(g)]
    assert same_span(images, k_invariant_cubics(g))
    for f in k_invariant_cubics(g):
        for x in k_generators(g):
            assert heis_act_poly(x, f) == f


def test_quartic_from_complex_cubic():
    _, q = quartic_basis(3)[4]
    cubic = partial_derivative(q, 0).map_coefficients(lambda c: complex(c) * (1 + 2j))
    back = quartic_from_cubic(cubic)
    assert (back - q.map_coefficients(lambda c: complex(c) * (1 + 2j))).max_abs_coefficient() < 1e-12


def test_eigenspace_sizes_and_reindex():
    basis = eigenspace_basis(BitVec(0b0110, 4), 4)
    assert len(basis.plus_indices) == len(basis.minus_indices) == 8
    assert sorted(basis.reindex.values()) == list(range(8))


def test_independent_etas_share_a_quarter():
    a = eigenspace_basis(BitVec(0b0001, 4), 4)
    b = eigenspace_basis(BitVec(0b0010, 4), 4)
    assert len(set(a.plus_indices) & set(b.plus_indices)) == 4


def test_restriction_lands_in_lower_k_cubics():
    g = 4
    for chi in (1, 6, 15):
        basis = eigenspace_basis(BitVec(chi, g), g)
        images = [restrict_to_eigenspace(f, basis) for f in k_invariant_cubics(g)]
        images = [p for p in images if not p.is_zero()]
        assert same_span(images, k_invariant_cubics(g - 1))


@pytest.mark.parametrize("g,rank", [(3, 15), (4, 51)])
def test_combined_restriction_injective(g, rank):
    cert = combined_restriction_is_injective(g)
    assert cert.injective and cert.rank == rank
    assert cert.summary() == f"injective, rank {rank}/{rank}"


def test_g2_flagged_outside_range():
    cert = combined_restriction_is_injective(2)
    assert cert.outside_hypothesis
    assert "outside" in cert.summary()


@pytest.mark.parametrize("g", [3, 4])
def test_minus_restriction_vanishes(g):
    assert minus_restriction_vanishes(g)


def test_label_json_round_trip():
    for label in quartic_labels(3):
        obj = json.loads(json.dumps(label.to_json()))
        assert obj["type"] in ("Q0", "Qlam", "QLam")
        assert QuarticLabel.from_json(obj) == label
