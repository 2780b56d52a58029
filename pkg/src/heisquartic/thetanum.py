"""Second-order theta functions, Kummer sampling and relation recovery.

For a Siegel matrix ``tau`` the coordinates of a point ``z`` are

    Theta_sigma(z) = sum_n exp(pi i m^T (2 tau) m + 2 pi i m^T (2 z)),  m = n + sigma/2,

one for each ``sigma`` in F_2^g.  Translating ``z`` by ``(a + tau b)/2``
multiplies the coordinate vector by the Heisenberg element ``(1, b, chi_a)``
up to a scalar, which ties these coordinates to the combinatorial action
in :mod:`heisquartic.heisgroup`.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .heisgroup import HeisElem, act_on_index, j2_generators
from .invariants import (
    k_invariant_cubics,
    quartic_basis,
    quartic_from_cubic,
    quartic_labels,
)
from .polyalg import ThetaPoly, heis_act_poly, partial_derivative

MAX_RADIUS = 12.0
DEFAULT_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-7
MIN_GAP_RATIO = 1e3
FRESH_SAMPLES = 50
RESIDUAL_TOL = 1e-8


class ThetaTruncationError(RuntimeError):
    pass


class IndeterminateRank(RuntimeError):
    """No clear spectral gap separates the kernel from the rest."""

    def __init__(self, message: str, spectrum: np.ndarray):
        super().__init__(message)
        self.spectrum = spectrum


class ResidualCheckFailed(RuntimeError):
    pass


def _max_workers() -> int:
    cap = os.environ.get("THETA_MAX_THREADS")
    if cap:
        return max(1, int(cap))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class SiegelTau:
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("tau must be a square matrix")
        if np.linalg.norm(m - m.T) >= 1e-14:
            raise ValueError("tau must be symmetric")
        if np.linalg.eigvalsh(m.imag).min() <= 0:
            raise ValueError("Im tau must be positive definite")
        object.__setattr__(self, "matrix", m)

    @property
    def g(self) -> int:
        return self.matrix.shape[0]


def random_tau(g: int, seed: int) -> SiegelTau:
    """Re tau uniform in [-1/2, 1/2]; Im tau = M^T M + I rescaled to spectrum in [1, 3]."""
    if g not in (2, 3, 4):
        raise ValueError("random_tau supports g in {2, 3, 4}")
    rng = np.random.default_rng(seed)
    re = rng.uniform(-0.5, 0.5, size=(g, g))
    re = np.triu(re) + np.triu(re, 1).T
    m = rng.uniform(0.0, 1.0, size=(g, g))
    im = m.T @ m + np.eye(g)
    top = np.linalg.eigvalsh(im).max()
    if top > 1:
        im = np.eye(g) + 2.0 * (im - np.eye(g)) / (top - 1.0)
    im = (im + im.T) / 2
    return SiegelTau(re + 1j * im)


@dataclass(frozen=True)
class KummerPoint:
    coords: np.ndarray

    @classmethod
    def normalized(cls, raw: np.ndarray) -> KummerPoint:
        v = np.asarray(raw, dtype=complex)
        scale = np.abs(v).max()
        if not np.isfinite(scale) or scale == 0:
            raise ValueError("cannot normalize a zero or non-finite vector")
        v = v / scale
        lead = next(c for c in v if abs(c) > 1e-12)
        return cls(v * (abs(lead) / lead))

    @property
    def g(self) -> int:
        return int(self.coords.size).bit_length() - 1

    def distance(self, other: KummerPoint) -> float:
        return float(np.abs(self.coords - other.coords).max())


def _lattice_radius(q: np.ndarray, tol: float) -> float:
    covering = 0.5 * math.sqrt(np.trace(q))
    radius = math.sqrt(covering**2 + 2 * math.log(1 / tol) + 10)
    if radius > MAX_RADIUS:
        raise ThetaTruncationError(f"lattice radius {radius:.2f} exceeds cap {MAX_RADIUS}")
    return radius


def theta2_raw(z: Sequence[complex], tau: SiegelTau, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unnormalized second-order theta values, indexed by sigma bitmask."""
    t = tau.matrix
    g = tau.g
    z = np.asarray(z, dtype=complex).reshape(g)
    y_im = t.imag
    q = 4 * math.pi * y_im
    radius = _lattice_radius(q, tol)
    center = -np.linalg.solve(y_im, z.imag)
    half_widths = radius * np.sqrt(np.diag(np.linalg.inv(q)))
    chol = np.linalg.cholesky(q)
    out = np.empty(1 << g, dtype=complex)
    for sigma in range(1 << g):
        c = np.array([(sigma >> i) & 1 for i in range(g)]) / 2
        lo = np.ceil(center - c - half_widths).astype(int)
        hi = np.floor(center - c + half_widths).astype(int)
        grid = np.array(list(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))), dtype=float)
        m = grid + c
        keep = np.linalg.norm((m - center) @ chol, axis=1) <= radius
        m = m[keep]
        exponent = 1j * math.pi * np.einsum("ni,ij,nj->n", m, 2 * t, m) + 2j * math.pi * (m @ (2 * z))
        out[sigma] = np.exp(exponent).sum()
    return out


def theta2_vector(z: Sequence[complex], tau: SiegelTau, tol: float = DEFAULT_TOL) -> KummerPoint:
    return KummerPoint.normalized(theta2_raw(z, tau, tol))


def sample_points_z(tau: SiegelTau, n: int, seed) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    g = tau.g
    zs = []
    for _ in range(n):
        u = rng.uniform(0.0, 1.0, g)
        v = rng.uniform(0.0, 1.0, g)
        zs.append((u + tau.matrix @ v) / 2)
    return zs


def sample_kummer(tau: SiegelTau, n: int, seed, tol: float = DEFAULT_TOL) -> list[tuple[np.ndarray, KummerPoint]]:
    zs = sample_points_z(tau, n, seed)
    if not zs:
        return []
    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        points = list(pool.map(lambda z: theta2_vector(z, tau, tol), zs))
    return list(zip(zs, points))


def evaluate_many(poly: ThetaPoly, coords: np.ndarray) -> np.ndarray:
    """Evaluate ``poly`` at every row of ``coords``."""
    total = np.zeros(coords.shape[0], dtype=complex)
    for m, c in poly.items():
        term = np.full(coords.shape[0], complex(c))
        for v, e in m:
            term = term * coords[:, v] ** e
        total += term
    return total


def _coords(points: Sequence) -> np.ndarray:
    rows = [p.coords if isinstance(p, KummerPoint) else p[1].coords for p in points]
    return np.array(rows)


@dataclass
class KernelResult:
    kernel_dim: int
    kernel_basis: np.ndarray
    singular_values: np.ndarray
    gap_ratio: float


def relation_kernel(
    points: Sequence,
    monomial_basis: Sequence[ThetaPoly],
    rank_tol: float = DEFAULT_RANK_TOL,
    min_gap: float = MIN_GAP_RATIO,
) -> KernelResult:
    """Relations among ``monomial_basis`` on the sampled points, via SVD.

    ``points`` are KummerPoints or ``(z, KummerPoint)`` pairs.  Kernel vectors
    are the columns of ``kernel_basis`` (coefficients w.r.t. the basis).
    """
    ncols = len(monomial_basis)
    if len(points) < 2 * ncols + 20:
        raise ValueError(f"need at least {2 * ncols + 20} points for {ncols} basis polynomials")
    coords = _coords(points)
    matrix = np.column_stack([evaluate_many(p, coords) for p in monomial_basis])
    _, s, vh = np.linalg.svd(matrix)
    small = s < rank_tol * s[0]
    k = int(small.sum())
    if k and not small[-k:].all():
        raise IndeterminateRank("singular values below threshold are not trailing", s)
    if k == 0 or k == ncols:
        gap = math.inf
    else:
        gap = float(s[ncols - k - 1] / s[ncols - k]) if s[ncols - k] > 0 else math.inf
        if gap < min_gap:
            raise IndeterminateRank(f"spectral gap ratio {gap:.3g} below {min_gap:g}", s)
    basis = vh[ncols - k:].conj().T
    return KernelResult(k, basis, s, gap)


def combine(coeffs: Sequence[complex], polys: Sequence[ThetaPoly]) -> ThetaPoly:
    result = ThetaPoly.zero(polys[0].g)
    for c, p in zip(coeffs, polys):
        result = result + p.scale(complex(c))
    return result


def normalize_max(q: ThetaPoly) -> ThetaPoly:
    """Scale so the coefficient of largest modulus becomes 1."""
    _, lead = max(q.items(), key=lambda t: abs(t[1]))
    return q.map_coefficients(lambda c: c / lead)


def projective_deviation(first: ThetaPoly, second: ThetaPoly) -> float:
    """Max coefficient difference after scaling ``second`` to match ``first`` at its largest coefficient."""
    m, c = max(first.items(), key=lambda t: abs(t[1]))
    other = second.coefficient(m)
    if other == 0:
        return math.inf
    scaled = second.map_coefficients(lambda x: x * c / other)
    support = set(first.support()) | set(scaled.support())
    return max(abs(complex(first.coefficient(mm)) - complex(scaled.coefficient(mm))) for mm in support)


def invariance_residual(q: ThetaPoly) -> float:
    worst = 0.0
    for x in j2_generators(q.g):
        diff = heis_act_poly(x, q) - q
        worst = max(worst, float(diff.max_abs_coefficient()))
    return worst


def quartic_coordinates(q: ThetaPoly) -> list[complex]:
    """Coefficients of ``q`` with respect to the invariant quartic basis."""
    basis = [p for _, p in quartic_basis(q.g)]
    out = []
    for p in basis:
        m, c = p.items()[0]
        out.append(complex(q.coefficient(m)) / complex(c))
    if invariance_residual(q) > 1e-9 or (combine(out, basis) - q).max_abs_coefficient() > 1e-9:
        raise ValueError("quartic is not in the span of the invariant basis")
    return out


def gradient_residual(q: ThetaPoly, coords: np.ndarray) -> float:
    """Worst relative value of a partial derivative of ``q`` on the given points."""
    scale3 = np.abs(coords).max() ** 3
    worst = 0.0
    for sigma in range(1 << q.g):
        d = partial_derivative(q, sigma)
        if d.is_zero():
            continue
        values = np.abs(evaluate_many(d, coords))
        worst = max(worst, float(values.max() / (d.max_abs_coefficient() * scale3)))
    return worst


def value_residual(q: ThetaPoly, coords: np.ndarray) -> float:
    scale = np.abs(coords).max() ** q.degree()
    return float(np.abs(evaluate_many(q, coords)).max() / (q.max_abs_coefficient() * scale))


@dataclass
class Reconstruction:
    g: int
    quartic: ThetaPoly
    kernel: KernelResult
    value_residual: float
    gradient_residual: float
    invariance_residual: float
    labels: list = field(default_factory=list)

    def basis_coefficients(self) -> list[complex]:
        return quartic_coordinates(self.quartic)


def _sample_count(ncols: int) -> int:
    return 2 * ncols + 20


def coble_reconstruction(tau: SiegelTau, seed, tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL) -> Reconstruction:
    if tau.g != 3:
        raise ValueError("the Coble quartic is reconstructed for g = 3 only")
    cubics = k_invariant_cubics(3)
    samples = sample_kummer(tau, _sample_count(len(cubics)), [seed, 0], tol)
    kernel = relation_kernel(samples, cubics, rank_tol)
    if kernel.kernel_dim != 1:
        raise IndeterminateRank(f"expected a 1-dimensional cubic kernel, got {kernel.kernel_dim}", kernel.singular_values)
    cubic = combine(kernel.kernel_basis[:, 0], cubics)
    quartic = normalize_max(quartic_from_cubic(cubic))
    fresh = _coords(sample_kummer(tau, FRESH_SAMPLES, [seed, 1], tol))
    result = Reconstruction(
        3,
        quartic,
        kernel,
        value_residual(quartic, fresh),
        gradient_residual(quartic, fresh),
        invariance_residual(quartic),
        quartic_labels(3),
    )
    if result.gradient_residual >= RESIDUAL_TOL:
        raise ResidualCheckFailed(f"partials do not vanish on the Kummer: residual {result.gradient_residual:.3g}")
    return result


def coble_quartic(tau: SiegelTau, seed) -> ThetaPoly:
    return coble_reconstruction(tau, seed).quartic


def kummer_reconstruction(tau: SiegelTau, seed, tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL) -> Reconstruction:
    if tau.g != 2:
        raise ValueError("the Kummer quartic is reconstructed for g = 2 only")
    basis = [p for _, p in quartic_basis(2)]
    samples = sample_kummer(tau, _sample_count(len(basis)), [seed, 0], tol)
    kernel = relation_kernel(samples, basis, rank_tol)
    if kernel.kernel_dim != 1:
        raise IndeterminateRank(f"expected a 1-dimensional quartic kernel, got {kernel.kernel_dim}", kernel.singular_values)
    quartic = normalize_max(combine(kernel.kernel_basis[:, 0], basis))
    fresh = _coords(sample_kummer(tau, FRESH_SAMPLES, [seed, 1], tol))
    result = Reconstruction(
        2,
        quartic,
        kernel,
        value_residual(quartic, fresh),
        gradient_residual(quartic, fresh),
        invariance_residual(quartic),
        quartic_labels(2),
    )
    if result.value_residual >= RESIDUAL_TOL:
        raise ResidualCheckFailed(f"quartic does not vanish on the Kummer: residual {result.value_residual:.3g}")
    return result


def kummer_quartic(tau: SiegelTau, seed) -> ThetaPoly:
    return kummer_reconstruction(tau, seed).quartic


def translate_by_half_period(z: np.ndarray, tau: SiegelTau, a: int, b: int) -> np.ndarray:
    """z + (a + tau b)/2 for bit vectors a, b."""
    g = tau.g
    av = np.array([(a >> i) & 1 for i in range(g)], dtype=float)
    bv = np.array([(b >> i) & 1 for i in range(g)], dtype=float)
    return z + (av + tau.matrix @ bv) / 2


def act_on_coordinates(x: HeisElem, coords: np.ndarray) -> np.ndarray:
    """Coordinates of ``x . v`` where ``v = sum coords[b] X_b``."""
    out = np.zeros_like(coords)
    for b in range(coords.size):
        s, target = act_on_index(x, b)
        out[target] += float(s) * coords[b]
    return out


def heisenberg_mismatch(raw_translated: np.ndarray, raw: np.ndarray, x: HeisElem) -> float:
    """Distance between two vectors after fitting one global scalar (relative to sup-norm)."""
    predicted = act_on_coordinates(x, raw)
    scalar = np.vdot(predicted, raw_translated) / np.vdot(predicted, predicted)
    return float(np.abs(raw_translated - scalar * predicted).max() / np.abs(raw_translated).max())
