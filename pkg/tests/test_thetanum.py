from __future__ import annotations

import numpy as np
import pytest

from heisquartic import thetanum
from heisquartic.heisgroup import BitVec, HeisElem
from heisquartic.invariants import k_invariant_cubics, quartic_basis
from heisquartic.polyalg import ThetaPoly, monomials_of_degree

SEED = 20240611


@pytest.fixture(scope="module")
def tau3():
    return thetanum.random_tau(3, SEED)


@pytest.fixture(scope="module")
def tau2():
    return thetanum.random_tau(2, SEED)


def test_random_tau_deterministic_and_reduced():
    a = thetanum.random_tau(3, 5)
    b = thetanum.random_tau(3, 5)
    assert np.array_equal(a.matrix, b.matrix)
    eig = np.linalg.eigvalsh(a.matrix.imag)
    assert eig.min() >= 1 - 1e-12 and eig.max() <= 3 + 1e-12
    assert np.abs(a.matrix.real).max() <= 0.5


def test_siegel_validation():
    with pytest.raises(ValueError):
        thetanum.SiegelTau(np.array([[1j, 0.1], [0.2, 1j]]))
    with pytest.raises(ValueError):
        thetanum.SiegelTau(np.array([[-1j]]))


def test_second_order_thetas_are_even(tau3):
    z = np.array([0.1 + 0.2j, -0.3 + 0.05j, 0.22 - 0.1j])
    assert np.abs(thetanum.theta2_raw(z, tau3) - thetanum.theta2_raw(-z, tau3)).max() < 1e-10


def test_integer_periodicity(tau3):
    z = np.array([0.1 + 0.2j, -0.3 + 0.05j, 0.22 - 0.1j])
    shifted = z + np.array([1.0, 0.0, 0.0])
    assert np.abs(thetanum.theta2_raw(z, tau3) - thetanum.theta2_raw(shifted, tau3)).max() < 1e-10


def test_lattice_periodicity_projective(tau3):
    z = np.array([0.1 + 0.2j, -0.3 + 0.05j, 0.22 - 0.1j])
    shifted = z + tau3.matrix @ np.array([0.0, 1.0, 0.0])
    assert thetanum.theta2_vector(z, tau3).distance(thetanum.theta2_vector(shifted, tau3)) < 1e-9


@pytest.mark.parametrize("a,b", [(1, 0), (0, 1), (3, 5), (7, 7)])
def test_half_period_translation_is_heisenberg_action(tau3, a, b):
    z = np.array([0.13 + 0.07j, -0.21 + 0.11j, 0.05 - 0.02j])
    raw = thetanum.theta2_raw(z, tau3)
    moved = thetanum.theta2_raw(thetanum.translate_by_half_period(z, tau3, a, b), tau3)
    x = HeisElem.lift(BitVec(b, 3), BitVec(a, 3))
    assert thetanum.heisenberg_mismatch(moved, raw, x) < 1e-9


def test_sampling_deterministic_and_seed_sensitive(tau2):
    first = thetanum.sample_kummer(tau2, 5, 1)
    again = thetanum.sample_kummer(tau2, 5, 1)
    other = thetanum.sample_kummer(tau2, 5, 2)
    assert all(np.array_equal(p.coords, q.coords) for (_, p), (_, q) in zip(first, again))
    assert first[0][1].distance(other[0][1]) > 1e-3
    assert thetanum.sample_kummer(tau2, 0, 1) == []


def test_normalized_point():
    p = thetanum.KummerPoint.normalized(np.array([0, 2j, -1, 0.5]))
    assert np.abs(p.coords).max() == pytest.approx(1)
    assert p.coords[1] == pytest.approx(1)


def test_radius_cap():
    with pytest.raises(thetanum.ThetaTruncationError):
        thetanum._lattice_radius(np.eye(3) * 4 * np.pi * 400, 1e-12)


def test_kernel_needs_enough_points(tau2):
    basis = [p for _, p in quartic_basis(2)]
    with pytest.raises(ValueError):
        thetanum.relation_kernel(thetanum.sample_kummer(tau2, 5, 1), basis)


def test_g2_quartic_kernel(tau2):
    basis = [p for _, p in quartic_basis(2)]
    k = thetanum.relation_kernel(thetanum.sample_kummer(tau2, 2 * len(basis) + 20, 3), basis)
    assert k.kernel_dim == 1 and k.gap_ratio >= thetanum.MIN_GAP_RATIO


def test_g3_cubic_kernels(tau3):
    cubics = [ThetaPoly(3, {m: 1}) for m in monomials_of_degree(3, 3)]
    points = thetanum.sample_kummer(tau3, 2 * len(cubics) + 20, 4)
    assert thetanum.relation_kernel(points, cubics).kernel_dim == 8
    assert thetanum.relation_kernel(points, k_invariant_cubics(3)).kernel_dim == 1


def test_indeterminate_rank_on_tiny_gap(tau2):
    basis = [p for _, p in quartic_basis(2)]
    points = thetanum.sample_kummer(tau2, 2 * len(basis) + 20, 3)
    with pytest.raises(thetanum.IndeterminateRank):
        thetanum.relation_kernel(points, basis, min_gap=1e30)


def test_coble_reconstruction(tau3):
    recs = [thetanum.coble_reconstruction(tau3, s) for s in (11, 12)]
    assert thetanum.projective_deviation(recs[0].quartic, recs[1].quartic) < 1e-6
    for r in recs:
        assert r.gradient_residual < 1e-8
        assert r.invariance_residual < 1e-10
        assert len(r.basis_coefficients()) == 15


def test_kummer_reconstruction(tau2):
    rec = thetanum.kummer_reconstruction(tau2, 3)
    assert rec.value_residual < 1e-8
    assert rec.invariance_residual < 1e-10
    assert len(rec.basis_coefficients()) == 5


def test_genus_guards(tau2, tau3):
    with pytest.raises(ValueError):
        thetanum.coble_reconstruction(tau2, 1)
    with pytest.raises(ValueError):
        thetanum.kummer_reconstruction(tau3, 1)


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("THETA_MAX_THREADS", "1")
    assert thetanum._max_workers() == 1
