"""Invariant quartics, K-invariant cubics and restriction to eigenspaces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .heisgroup import BitVec, GenusMismatch, TwoTorsionPoint, parity
from .polyalg import (
    Monomial,
    RatMatrix,
    ThetaPoly,
    monomial_from_vars,
    monomial_key,
    monomial_vars,
    partial_derivative,
    rank,
    solve,
)


@dataclass(frozen=True)
class QuarticLabel:
    """``Q0``, ``Qlam`` (a nonzero vector) or ``QLam`` (a 2-dimensional subspace).

    For ``QLam`` the data are the three nonzero vectors of the subspace, sorted.
    """

    kind: str
    data: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "Q0":
            ok = self.data == ()
        elif self.kind == "Qlam":
            ok = len(self.data) == 1 and self.data[0] != 0
        elif self.kind == "QLam":
            a, b, c = self.data if len(self.data) == 3 else (0, 0, 0)
            ok = 0 < a < b < c and a ^ b == c
        else:
            ok = False
        if not ok:
            raise ValueError(f"invalid quartic label {self.kind} {self.data}")

    def to_json(self) -> dict:
        return {"type": self.kind, "data": list(self.data)}

    @classmethod
    def from_json(cls, obj: dict) -> QuarticLabel:
        return cls(obj["type"], tuple(obj["data"]))


def quartic_labels(g: int) -> list[QuarticLabel]:
    n = 1 << g
    labels = [QuarticLabel("Q0")]
    labels += [QuarticLabel("Qlam", (lam,)) for lam in range(1, n)]
    planes = {tuple(sorted((lam, mu, lam ^ mu))) for lam, mu in combinations(range(1, n), 2)}
    labels += [QuarticLabel("QLam", p) for p in sorted(planes)]
    return labels


def invariant_quartic_dimension(g: int) -> int:
    return (2**g + 1) * (2 ** (g - 1) + 1) // 3


def k_invariant_cubic_dimension(g: int) -> int:
    n = 2**g
    return 1 + (n - 1) + (n - 1) * (n - 2) // 6


def quartic_for_label(g: int, label: QuarticLabel) -> ThetaPoly:
    """The orbit sum over all translates ``sigma``, exactly as written (with multiplicities)."""
    shifts = {"Q0": (0, 0, 0, 0), "Qlam": None, "QLam": None}[label.kind]
    if label.kind == "Qlam":
        lam = label.data[0]
        shifts = (0, 0, lam, lam)
    elif label.kind == "QLam":
        shifts = (0,) + label.data
    terms: dict[Monomial, Fraction] = {}
    for sigma in range(1 << g):
        m = monomial_from_vars(sigma ^ t for t in shifts)
        terms[m] = terms.get(m, 0) + Fraction(1)
    return ThetaPoly(g, terms)


def _check_genus(g: int, lo: int = 2, hi: int = 8) -> None:
    if not lo <= g <= hi:
        raise ValueError(f"genus must lie in [{lo}, {hi}], got {g}")


@lru_cache(maxsize=None)
def _quartic_basis(g: int) -> tuple[tuple[QuarticLabel, ThetaPoly], ...]:
    return tuple((lab, quartic_for_label(g, lab)) for lab in quartic_labels(g))


def quartic_basis(g: int) -> list[tuple[QuarticLabel, ThetaPoly]]:
    _check_genus(g)
    return list(_quartic_basis(g))


def k_invariant_cubic_monomials(g: int) -> list[Monomial]:
    n = 1 << g
    mons = {
        monomial_from_vars((a, b, a ^ b))
        for a in range(n)
        for b in range(n)
    }
    return sorted(mons, key=monomial_key)


def k_invariant_cubics(g: int) -> list[ThetaPoly]:
    _check_genus(g)
    return [ThetaPoly(g, {m: 1}) for m in k_invariant_cubic_monomials(g)]


def is_k_invariant_monomial(m: Monomial) -> bool:
    acc = 0
    for v, e in m:
        if e & 1:
            acc ^= v
    return acc == 0


@lru_cache(maxsize=None)
def _derivative_system(g: int) -> tuple[list[Monomial], RatMatrix]:
    """Columns: d/dX_0 of each basis quartic, in K-invariant cubic coordinates."""
    cubics = k_invariant_cubic_monomials(g)
    index = {m: i for i, m in enumerate(cubics)}
    cols = []
    for _, q in _quartic_basis(g):
        col = [Fraction(0)] * len(cubics)
        for m, c in partial_derivative(q, 0).items():
            col[index[m]] = c
        cols.append(col)
    return cubics, RatMatrix(cols).transpose()


def quartic_from_cubic(f: ThetaPoly) -> ThetaPoly:
    """The invariant quartic whose derivative in ``X_0`` is ``f``.

    Exact for rational coefficients; complex coefficients are solved in
    floating point against the same linear system.
    """
    g = f.g
    for m, _ in f.items():
        if len(monomial_vars(m)) != 3 or not is_k_invariant_monomial(m):
            raise ValueError(f"not a K-invariant cubic: contains {m}")
    cubics, system = _derivative_system(g)
    basis = _quartic_basis(g)
    if f.is_zero():
        return ThetaPoly.zero(g)
    coeffs = [f.coefficient(m) for m in cubics]
    if all(isinstance(c, (int, Fraction)) for c in coeffs):
        x = solve(system, coeffs)
        if x is None:
            raise ValueError("cubic is not in the image of d/dX_0")
    else:
        a = np.array([[float(v) for v in row] for row in system.rows])
        b = np.array([complex(c) for c in coeffs])
        x, *_ = np.linalg.lstsq(a, b, rcond=None)
        if np.linalg.norm(a @ x - b) > 1e-9 * max(1.0, np.linalg.norm(b)):
            raise ValueError("cubic is not in the image of d/dX_0")
        x = [complex(v) for v in x]
    result = ThetaPoly.zero(g)
    for c, (_, q) in zip(x, basis):
        result = result + q.scale(c)
    return result


# -- eigenspaces -------------------------------------------------------------

@dataclass(frozen=True)
class EigenspaceBasis:
    eta: TwoTorsionPoint
    plus_indices: tuple[int, ...]
    minus_indices: tuple[int, ...]
    reindex: dict

    @property
    def g(self) -> int:
        return self.eta.g


def _delete_bit(x: int, p: int) -> int:
    low = x & ((1 << p) - 1)
    return ((x >> (p + 1)) << p) | low


def eigenspace_basis(eta: TwoTorsionPoint | BitVec, g: int) -> EigenspaceBasis:
    """Split the theta basis by the eigenvalue of ``eta`` in K.

    The surviving indices are identified with F_2^(g-1) by deleting the
    coordinate of the lowest set bit of ``eta``.
    """
    if isinstance(eta, BitVec):
        eta = TwoTorsionPoint(BitVec.zero(eta.g), eta)
    if eta.g != g:
        raise GenusMismatch(f"eta of genus {eta.g} for genus {g}")
    if not eta.in_k():
        raise ValueError("eta must lie in K (zero translation part)")
    chi = eta.chi.bits
    if chi == 0:
        raise ValueError("eta must be nonzero")
    plus = tuple(s for s in range(1 << g) if not parity(chi & s))
    minus = tuple(s for s in range(1 << g) if parity(chi & s))
    pivot = (chi & -chi).bit_length() - 1
    reindex = {s: _delete_bit(s, pivot) for s in plus}
    return EigenspaceBasis(eta, plus, minus, reindex)


def restrict_to_eigenspace(f: ThetaPoly, basis: EigenspaceBasis) -> ThetaPoly:
    if f.g != basis.g:
        raise GenusMismatch(f"polynomial of genus {f.g} restricted with genus {basis.g}")
    terms: dict[Monomial, object] = {}
    r = basis.reindex
    for m, c in f.items():
        if all(v in r for v, _ in m):
            image = tuple(sorted((r[v], e) for v, e in m))
            terms[image] = terms.get(image, 0) + c
    return ThetaPoly(f.g - 1, terms)


def restrict_to_minus_eigenspace(f: ThetaPoly, basis: EigenspaceBasis) -> ThetaPoly:
    """Set the plus-variables to zero (no renaming)."""
    minus = set(basis.minus_indices)
    return ThetaPoly(f.g, {m: c for m, c in f.items() if all(v in minus for v, _ in m)})


def nonzero_k_elements(g: int) -> list[TwoTorsionPoint]:
    zero = BitVec.zero(g)
    return [TwoTorsionPoint(zero, BitVec(c, g)) for c in range(1, 1 << g)]


@dataclass(frozen=True)
class RestrictionCertificate:
    g: int
    rank: int
    dimension: int
    outside_hypothesis: bool

    @property
    def injective(self) -> bool:
        return self.rank == self.dimension

    def summary(self) -> str:
        verdict = "injective" if self.injective else "not injective"
        note = " (g < 3: outside the lemma's range)" if self.outside_hypothesis else ""
        return f"{verdict}, rank {self.rank}/{self.dimension}{note}"


def restriction_matrix(g: int) -> RatMatrix:
    """Rows: K-invariant cubics; columns: coordinates of all restrictions, eta in increasing order."""
    cubics = k_invariant_cubics(g)
    blocks = []
    for eta in nonzero_k_elements(g):
        basis = eigenspace_basis(eta, g)
        images = [restrict_to_eigenspace(f, basis) for f in cubics]
        support = sorted({m for p in images for m in p.support()}, key=monomial_key)
        blocks.append([[p.coefficient(m) for m in support] for p in images])
    rows = [sum((block[i] for block in blocks), []) for i in range(len(cubics))]
    return RatMatrix(rows)


def combined_restriction_is_injective(g: int) -> RestrictionCertificate:
    _check_genus(g)
    m = restriction_matrix(g)
    return RestrictionCertificate(g, rank(m), m.nrows, outside_hypothesis=g < 3)


def minus_restriction_vanishes(g: int) -> bool:
    """Whether every K-invariant cubic vanishes identically on every minus-eigenspace."""
    cubics = k_invariant_cubics(g)
    return all(
        restrict_to_minus_eigenspace(f, eigenspace_basis(eta, g)).is_zero()
        for eta in nonzero_k_elements(g)
        for f in cubics
    )
