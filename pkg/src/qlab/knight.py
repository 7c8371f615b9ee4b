"""Strict localizability verdicts for excitations of the ground state.

A state is strictly local over a region when every displacement expectation
indexed by a test point supported in the complement equals the ground-state
value.  For the state classes handled here the condition is decidable in
closed form, and each verdict is double-checked by a seeded sampled defect:

* one-quantum states: local iff the mode vector lies in the localizable
  kernel of the region (which is empty whenever the frequency operator
  couples the region to its complement);
* coherent states: local iff the phase point is supported in the region;
* two-term coherent superpositions: local for every coefficient choice iff
  the two phase points coincide.

The algebraic criterion decides the verdict; sampling is the cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    EmptyRegionError,
    FullRegionError,
    NotNormalizedError,
    ZeroSuperpositionError,
)
from .models import Region
from .gaussian import (
    ComplexMode,
    PhasePoint,
    coherent_weyl,
    mode_inner,
    superposition_weyl,
    vacuum_weyl,
    z_map,
)
from .spectral import SpectralData, localizable_modes

#: sampled defect at or below this value counts as zero
DEFECT_TOL = 1e-9

#: algebraic distances at or below this value count as zero
ALGEBRAIC_TOL = 1e-10

#: unit-norm requirement for one-quantum mode vectors
NORMALIZATION_TOL = 1e-12


class LocalityVerdict(str, Enum):
    STRICTLY_LOCAL = "StrictlyLocal"
    NOT_LOCAL = "NotLocal"


class KnightVerdict(str, Enum):
    NO_FINITE_PARTICLE_LOCAL_STATE = "NoFiniteParticleLocalState"
    LOCAL_ONE_QUANTUM_STATE_EXISTS = "LocalOneQuantumStateExists"


class LichtVerdict(str, Enum):
    ALL_SUPERPOSITIONS_LOCAL = "AllSuperpositionsLocal"
    SUPERPOSITION_BREAKS_LOCALITY = "SuperpositionBreaksLocality"


@dataclass(frozen=True)
class SamplerSpec:
    """Deterministic sampler of test points supported in a site set.

    Identical specs produce identical sample sequences: a fresh generator
    is seeded per call, and each sample draws the displacement entries
    first, then the momentum entries, uniformly in
    ``[-amplitude, amplitude]`` on the support.
    """

    count: int
    amplitude: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sampler count must be positive")
        if self.amplitude <= 0:
            raise ValueError("sampler amplitude must be positive")

    def phase_points(self, n: int, support: tuple[int, ...]) -> list[PhasePoint]:
        """Draw ``count`` phase points vanishing outside ``support``."""
        rng = np.random.default_rng(self.seed)
        idx = np.array(sorted(support), dtype=int)
        points = []
        for _ in range(self.count):
            q = np.zeros(n)
            p = np.zeros(n)
            q[idx] = rng.uniform(-self.amplitude, self.amplitude, idx.size)
            p[idx] = rng.uniform(-self.amplitude, self.amplitude, idx.size)
            points.append(PhasePoint(q, p))
        return points


@dataclass(frozen=True)
class DefectReport:
    """Outcome of a strict-locality test for one state over one region."""

    region: Region
    algebraic_distance: float
    sampled_defect: float
    samples: int
    verdict: LocalityVerdict
    note: str = ""

    @property
    def consistent(self) -> bool:
        """Sampled and algebraic routes agree on zero versus nonzero."""
        return (self.algebraic_distance <= ALGEBRAIC_TOL) == (
            self.sampled_defect <= DEFECT_TOL
        )


@dataclass(frozen=True)
class LichtReport:
    """Outcome of the two-state superposition locality test.

    ``degenerate_pairs`` counts coefficient pairs whose superposition has
    vanishing norm (possible only for coinciding states with cancelling
    coefficients); they index no state and are excluded from the defect.
    """

    region: Region
    verdict: LichtVerdict
    max_defect: float
    algebraic_all_local: bool
    samples: int
    grid_size: int
    degenerate_pairs: int = 0

    @property
    def consistent(self) -> bool:
        """Sampled verdict matches the algebraic prediction (equal points)."""
        return (self.verdict is LichtVerdict.ALL_SUPERPOSITIONS_LOCAL) == (
            self.algebraic_all_local
        )


def one_quantum_weyl(xi: ComplexMode, eta: ComplexMode) -> complex:
    """Displacement expectation in the one-quantum state of unit ``xi``:
    ``(1 - |<xi, eta>|^2) exp(-|eta|^2 / 2)``.
    """
    overlap = mode_inner(xi, eta)
    return complex((1.0 - abs(overlap) ** 2) * vacuum_weyl(eta))


def _verdict(algebraic_distance: float, sampled_defect: float) -> LocalityVerdict:
    if algebraic_distance <= ALGEBRAIC_TOL and sampled_defect <= DEFECT_TOL:
        return LocalityVerdict.STRICTLY_LOCAL
    return LocalityVerdict.NOT_LOCAL


def one_quantum_defect(
    s: SpectralData, xi: ComplexMode, b: Region, sampler: SamplerSpec
) -> DefectReport:
    """Strict-locality test of the one-quantum state built on ``xi``.

    The algebraic distance is the norm of the component of ``xi``
    orthogonal to the localizable kernel of the region; the sampled defect
    is the largest deviation of the one-quantum displacement expectation
    from the ground-state value over seeded test points supported in the
    complement.
    """
    if xi.n != s.n:
        raise ValueError("mode vector dimension mismatch")
    if abs(xi.norm - 1.0) > NORMALIZATION_TOL:
        raise NotNormalizedError(f"mode vector norm {xi.norm!r} is not 1")
    if b.is_empty:
        raise EmptyRegionError("region has no sites")
    report = localizable_modes(s, b)
    projected = np.zeros(s.n, dtype=complex)
    for basis_vec in report.localizable_basis:
        projected += np.vdot(basis_vec, xi.values) * basis_vec
    algebraic_distance = float(np.linalg.norm(xi.values - projected))

    support = b.complement().members
    defect = 0.0
    points = sampler.phase_points(s.n, support)
    for y in points:
        zy = z_map(s, y)
        defect = max(defect, abs(one_quantum_weyl(xi, zy) - vacuum_weyl(zy)))
    return DefectReport(
        region=b,
        algebraic_distance=algebraic_distance,
        sampled_defect=defect,
        samples=len(points),
        verdict=_verdict(algebraic_distance, defect),
    )


def knight_verdict(s: SpectralData, b: Region) -> KnightVerdict:
    """Existence of a strictly local finite-quanta excitation over ``b``.

    No finite-particle state is strictly local exactly when the region has
    an empty localizable kernel (for one quantum this is an equivalence;
    for higher quanta numbers the exclusion is inherited, spot-checked on
    the truncated space in the test suite).
    """
    report = localizable_modes(s, b)
    if report.localizable_dim == 0:
        return KnightVerdict.NO_FINITE_PARTICLE_LOCAL_STATE
    return KnightVerdict.LOCAL_ONE_QUANTUM_STATE_EXISTS


def coherent_locality_check(
    s: SpectralData, x: PhasePoint, b: Region, sampler: SamplerSpec
) -> DefectReport:
    """Strict-locality test of the coherent state attached to ``x``.

    Algebraic criterion: the phase point is supported in the region (the
    expectation then carries no phase against complement test points).
    """
    if x.n != s.n:
        raise ValueError("phase point dimension mismatch")
    if b.is_empty:
        raise EmptyRegionError("region has no sites")
    algebraic_distance = x.offsupport_norm(b)
    support = b.complement().members
    defect = 0.0
    points = sampler.phase_points(s.n, support)
    for y in points:
        zy = z_map(s, y)
        defect = max(defect, abs(coherent_weyl(s, x, y) - vacuum_weyl(zy)))
    note = ""
    if not np.any(x.q) and not np.any(x.p):
        note = "state is the vacuum"
    return DefectReport(
        region=b,
        algebraic_distance=algebraic_distance,
        sampled_defect=defect,
        samples=len(points),
        verdict=_verdict(algebraic_distance, defect),
        note=note,
    )


def licht_pair_test(
    s: SpectralData,
    x1: PhasePoint,
    x2: PhasePoint,
    b: Region,
    coeff_grid: list[tuple[complex, complex]],
    sampler: SamplerSpec,
) -> LichtReport:
    """Locality of every superposition of two region-supported coherent states.

    Both phase points must be supported in the region (each coherent state
    is then strictly local on its own).  All superpositions stay local iff
    the two points coincide; otherwise some coefficient choice shows a
    defect against complement test points.  The region must leave a
    nonempty complement, since the equivalence presupposes test points
    outside it.
    """
    if b.is_empty:
        raise EmptyRegionError("region has no sites")
    if b.is_full:
        raise FullRegionError("region complement has no sites")
    for label, x in (("x1", x1), ("x2", x2)):
        if x.n != s.n:
            raise ValueError(f"{label} dimension mismatch")
        if not x.is_supported_in(b):
            raise ValueError(f"{label} is not supported in the region")
    grid = [(complex(a), complex(c)) for a, c in coeff_grid]
    if not grid:
        raise ValueError("coefficient grid is empty")
    if any(a == 0 and c == 0 for a, c in grid):
        raise ValueError("coefficient grid contains the zero pair")

    support = b.complement().members
    points = sampler.phase_points(s.n, support)
    max_defect = 0.0
    degenerate = 0
    for alpha, beta in grid:
        try:
            for y in points:
                value = superposition_weyl(alpha, beta, s, x1, x2, y)
                max_defect = max(max_defect, abs(value - vacuum_weyl(z_map(s, y))))
        except ZeroSuperpositionError:
            # the coefficients cancel the (coinciding) states exactly; no
            # state exists for this pair, so it contributes no defect
            degenerate += 1
    algebraic_all_local = bool(
        np.array_equal(x1.q, x2.q) and np.array_equal(x1.p, x2.p)
    )
    verdict = (
        LichtVerdict.ALL_SUPERPOSITIONS_LOCAL
        if max_defect <= DEFECT_TOL
        else LichtVerdict.SUPERPOSITION_BREAKS_LOCALITY
    )
    return LichtReport(
        region=b,
        verdict=verdict,
        max_defect=max_defect,
        algebraic_all_local=algebraic_all_local,
        samples=len(points),
        grid_size=len(grid),
        degenerate_pairs=degenerate,
    )
