"""Closed-form ground-state measurement statistics for sharp windows.

The ground-state displacement vector is a centered Gaussian whose
covariance is half the inverse frequency operator.  Asking whether one
site's displacement falls inside an interval, and projecting-and-
renormalizing on the answer, therefore reduces to truncated-normal
conditioning: the post-measurement moments at every other site follow
from the bivariate conditional decomposition, and sites correlated with
the measured one shift even though the operation was local.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, ndtr

from .spectral import SpectralData

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

#: number of Gauss-Legendre nodes used for plotted density curves
DENSITY_QUADRATURE_NODES = 200


@dataclass(frozen=True)
class WindowEvent:
    """Sharp window question: does the displacement at ``site`` lie in [lo, hi]?"""

    site: int
    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ValueError(f"window needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.site < 0:
            raise ValueError("site index must be nonnegative")


def _log_phi(x: float) -> float:
    return -0.5 * x * x - _LOG_SQRT_2PI


def _left_tail_log_mass(a: float, b: float) -> float:
    """log(Phi(b) - Phi(a)) for a < b <= 0, stable deep in the tail."""
    la, lb = float(log_ndtr(a)), float(log_ndtr(b))
    return lb + math.log1p(-math.exp(la - lb))


def _standard_window(a: float, b: float) -> tuple[float, float, float]:
    """Mass and density ratios of the standard normal on [a, b].

    Returns ``(mass, phi(a)/mass, phi(b)/mass)``.  Windows sitting in a far
    tail are reflected to the left tail and evaluated through log
    cumulatives, which keeps the ratios finite where the direct cumulative
    difference would round to zero.
    """
    if a > 0:
        mass, rb, ra = _standard_window(-b, -a)
        return mass, ra, rb
    if b <= 0:
        log_mass = _left_tail_log_mass(a, b)
        ra = math.exp(_log_phi(a) - log_mass)
        rb = math.exp(_log_phi(b) - log_mass)
        return math.exp(log_mass), ra, rb
    mass = float(ndtr(b) - ndtr(a))
    return mass, math.exp(_log_phi(a)) / mass, math.exp(_log_phi(b)) / mass


def _site_sigma(s: SpectralData, site: int) -> float:
    if not 0 <= site < s.n:
        raise ValueError(f"site {site} outside [0, {s.n})")
    return math.sqrt(s.omega_inv[site, site] / 2.0)


def window_probability(s: SpectralData, w: WindowEvent) -> float:
    """Ground-state probability of the window event; strictly positive."""
    sigma = _site_sigma(s, w.site)
    mass, _, _ = _standard_window(w.lo / sigma, w.hi / sigma)
    return mass


def _truncated_moments(sigma: float, lo: float, hi: float) -> tuple[float, float]:
    """Mean and second moment of a centered normal restricted to [lo, hi]."""
    a, b = lo / sigma, hi / sigma
    if a > 0:
        mean, second = _truncated_moments(sigma, -hi, -lo)
        return -mean, second
    _, ra, rb = _standard_window(a, b)
    mean = sigma * (ra - rb)
    second = sigma * sigma * (1.0 + a * ra - b * rb)
    return mean, second


def conditional_moments(
    s: SpectralData, w: WindowEvent, target: int
) -> tuple[float, float]:
    """Post-measurement moments of the displacement at ``target``.

    The state after observing the window outcome is the projected and
    renormalized ground state; its displacement marginals are those of the
    Gaussian conditioned on the measured coordinate lying in the window.
    With ``c`` the regression coefficient of target on measured site,

        mean   = c * E[x | window]
        second = Var(target | measured) + c^2 * E[x^2 | window].

    ``target`` may equal the measured site, in which case the truncated
    moments themselves come back.
    """
    if not 0 <= target < s.n:
        raise ValueError(f"target {target} outside [0, {s.n})")
    cov = s.omega_inv / 2.0
    sigma = _site_sigma(s, w.site)
    t_mean, t_second = _truncated_moments(sigma, w.lo, w.hi)
    c = cov[target, w.site] / cov[w.site, w.site]
    residual_var = max(
        cov[target, target] - cov[target, w.site] ** 2 / cov[w.site, w.site], 0.0
    )
    return c * t_mean, residual_var + c * c * t_second


def deviation_profile(s: SpectralData, w: WindowEvent) -> list[tuple[int, float]]:
    """Relative second-moment change at every site after the window event.

    Sites whose ground-state correlation with the measured site vanishes
    keep their moments exactly; every correlated site shifts, however far
    from the measured one.
    """
    cov = s.omega_inv / 2.0
    profile = []
    for site in range(s.n):
        _, second = conditional_moments(s, w, site)
        vacuum_var = cov[site, site]
        profile.append((site, abs(second - vacuum_var) / vacuum_var))
    return profile


def posterior_density_curve(
    s: SpectralData, w: WindowEvent, target: int, xs: np.ndarray
) -> np.ndarray:
    """Post-measurement displacement density at ``target`` on a grid.

    Marginalizes the bivariate ground-state Gaussian over the window with
    fixed-order Gauss-Legendre quadrature and renormalizes by the window
    probability; intended for plotting.
    """
    if not 0 <= target < s.n:
        raise ValueError(f"target {target} outside [0, {s.n})")
    xs = np.asarray(xs, dtype=float)
    cov = s.omega_inv / 2.0
    if target == w.site:
        sigma = _site_sigma(s, w.site)
        prob = window_probability(s, w)
        dens = np.exp(-0.5 * (xs / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
        return np.where((xs >= w.lo) & (xs <= w.hi), dens / prob, 0.0)
    sub = cov[np.ix_([target, w.site], [target, w.site])]
    det = sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]
    inv = np.array([[sub[1, 1], -sub[0, 1]], [-sub[1, 0], sub[0, 0]]]) / det
    nodes, weights = np.polynomial.legendre.leggauss(DENSITY_QUADRATURE_NODES)
    half = 0.5 * (w.hi - w.lo)
    mid = 0.5 * (w.hi + w.lo)
    ys = mid + half * nodes
    norm = 2.0 * math.pi * math.sqrt(det)
    out = np.empty_like(xs)
    for i, x in enumerate(xs):
        quad = np.exp(
            -0.5 * (inv[0, 0] * x * x + 2 * inv[0, 1] * x * ys + inv[1, 1] * ys * ys)
        )
        out[i] = half * float(weights @ quad) / norm
    return out / window_probability(s, w)
