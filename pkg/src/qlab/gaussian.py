"""Closed-form phase-space calculus for the harmonic ground state.

A classical phase point maps to a complex mode vector through the
frequency-weighted combination ``(W^{1/2} q + i W^{-1/2} p)/sqrt(2)``
(W the frequency operator).  Displacement (Weyl) operators indexed by mode
vectors obey the composition law

    W(u) W(v) = exp(-i Im<u, v>) W(u + v),

with the complex inner product conjugate-linear in the first argument; the
imaginary part of the mode inner product is then half the classical
symplectic form.  Every expectation value in this module follows from that
law plus the ground-state value exp(-|v|^2 / 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroSuperpositionError
from .models import Region, _read_only
from .spectral import SpectralData

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """Classical phase-space point: displacement and momentum vectors."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        p = np.array(self.p, dtype=float)
        if q.ndim != 1 or p.ndim != 1 or q.size != p.size:
            raise ValueError("q and p must be 1-d vectors of equal length")
        object.__setattr__(self, "q", _read_only(q))
        object.__setattr__(self, "p", _read_only(p))

    @property
    def n(self) -> int:
        return self.q.size

    def is_supported_in(self, b: Region) -> bool:
        """True when all components outside the region are exactly zero."""
        return self.offsupport_norm(b) == 0.0

    def offsupport_norm(self, b: Region) -> float:
        """Euclidean mass of the components outside the region."""
        comp = b.complement().indices()
        return float(np.sqrt(np.sum(self.q[comp] ** 2) + np.sum(self.p[comp] ** 2)))

    @staticmethod
    def zero(n: int) -> "PhasePoint":
        return PhasePoint(np.zeros(n), np.zeros(n))


@dataclass(frozen=True, eq=False)
class ComplexMode:
    """Complex mode vector indexing a displacement operator."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1:
            raise ValueError("mode vector must be 1-d")
        if not np.all(np.isfinite(v)):
            raise ValueError("mode vector entries must be finite")
        object.__setattr__(self, "values", _read_only(v))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True, eq=False)
class VacuumCovariances:
    """Ground-state second moments of displacements and momenta."""

    sigma_q: np.ndarray
    sigma_p: np.ndarray


def mode_inner(u: ComplexMode, v: ComplexMode) -> complex:
    """Complex inner product, conjugate-linear in the first argument."""
    return complex(np.vdot(u.values, v.values))


def z_map(s: SpectralData, x: PhasePoint) -> ComplexMode:
    """Mode vector of a phase point: ``(W^{1/2} q + i W^{-1/2} p)/sqrt(2)``."""
    if x.n != s.n:
        raise ValueError(f"phase point has {x.n} sites, system has {s.n}")
    return ComplexMode((s.omega_sqrt @ x.q + 1j * (s.omega_inv_sqrt @ x.p)) / _SQRT2)


def symplectic_form(x: PhasePoint, y: PhasePoint) -> float:
    """Classical symplectic form ``q_x . p_y - q_y . p_x``."""
    if x.n != y.n:
        raise ValueError("phase points have mismatched dimensions")
    return float(x.q @ y.p - y.q @ x.p)


def vacuum_weyl(xi: ComplexMode) -> complex:
    """Ground-state displacement expectation ``exp(-|xi|^2 / 2)``."""
    return complex(np.exp(-0.5 * xi.norm**2))


def _displaced_pair_weyl(xa: ComplexMode, xb: ComplexMode, y: ComplexMode) -> complex:
    """Matrix element of W(y) between vacua displaced by xa and xb.

    Two applications of the composition law reduce the triple product
    W(-xa) W(y) W(xb) to a phase times W(y - xa + xb), whose ground-state
    expectation is Gaussian in the norm.
    """
    shifted = ComplexMode(y.values - xa.values + xb.values)
    phase = mode_inner(xa, y).imag - mode_inner(
        ComplexMode(y.values - xa.values), xb
    ).imag
    return complex(np.exp(1j * phase) * vacuum_weyl(shifted))


def coherent_weyl(s: SpectralData, x: PhasePoint, y: PhasePoint) -> complex:
    """Displacement expectation in the coherent state attached to ``x``.

    Equals the ground-state value times the phase ``exp(i s(x, y))``; the
    modulus is unchanged, so a coherent state is exactly indistinguishable
    from the ground state wherever the symplectic form with the test point
    vanishes.
    """
    zy = z_map(s, y)
    return complex(np.exp(1j * symplectic_form(x, y)) * vacuum_weyl(zy))


def superposition_weyl(
    alpha: complex,
    beta: complex,
    s: SpectralData,
    x1: PhasePoint,
    x2: PhasePoint,
    y: PhasePoint,
) -> complex:
    """Displacement expectation in a normalized two-coherent superposition.

    All four cross terms come from the composition law; the normalization
    reuses the same matrix elements at zero displacement.
    """
    alpha = complex(alpha)
    beta = complex(beta)
    if alpha == 0 and beta == 0:
        raise ZeroSuperpositionError("both coefficients are zero")
    za, zb, zy = z_map(s, x1), z_map(s, x2), z_map(s, y)
    zero = ComplexMode(np.zeros(s.n, dtype=complex))
    weights = (
        (np.conj(alpha) * alpha, za, za),
        (np.conj(alpha) * beta, za, zb),
        (np.conj(beta) * alpha, zb, za),
        (np.conj(beta) * beta, zb, zb),
    )
    numerator = sum(c * _displaced_pair_weyl(xa, xb, zy) for c, xa, xb in weights)
    norm_sq = sum(c * _displaced_pair_weyl(xa, xb, zero) for c, xa, xb in weights)
    if abs(norm_sq) <= 1e-15 * (abs(alpha) ** 2 + abs(beta) ** 2):
        raise ZeroSuperpositionError("superposition has vanishing norm")
    return complex(numerator / norm_sq)


def vacuum_covariance(s: SpectralData) -> VacuumCovariances:
    """Ground-state covariances: half the -1 and +1 frequency powers."""
    return VacuumCovariances(sigma_q=s.omega_inv / 2.0, sigma_p=s.omega / 2.0)
