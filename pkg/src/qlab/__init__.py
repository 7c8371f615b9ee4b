"""qlab: numerical laboratory for localized excitations of harmonic ground states.

Builds finite harmonic systems, decides which excitations of their ground
state are strictly localized in a site region, and cross-checks every
closed-form verdict against a truncated Fock-space oracle and classical
Gaussian statistics.
"""

from .errors import (
    ConfigError,
    DecompositionFailureError,
    DimensionCapExceededError,
    EmptyRegionError,
    FullRegionError,
    NotNormalizedError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    QlabError,
    ZeroOperatorError,
    ZeroSuperpositionError,
)
from .models import (
    DynamicalMatrix,
    Region,
    build_chain,
    build_custom,
    build_discrete_klein_gordon,
)
from .spectral import (
    LocalityReport,
    SpectralData,
    localizable_modes,
    offblock_min_singular,
    spectral_decompose,
)
from .gaussian import (
    ComplexMode,
    PhasePoint,
    VacuumCovariances,
    coherent_weyl,
    mode_inner,
    superposition_weyl,
    symplectic_form,
    vacuum_covariance,
    vacuum_weyl,
    z_map,
)
from .knight import (
    DefectReport,
    KnightVerdict,
    LichtReport,
    LichtVerdict,
    LocalityVerdict,
    SamplerSpec,
    coherent_locality_check,
    knight_verdict,
    licht_pair_test,
    one_quantum_defect,
    one_quantum_weyl,
)
from .fock import (
    FockSpace,
    LocalPolynomial,
    build_fock,
    cyclicity_residuals,
    one_quantum_state,
    random_local_polynomial,
    separability_check,
    vacuum_weyl_oracle,
    weyl_matrix,
)
from .measure import (
    WindowEvent,
    conditional_moments,
    deviation_profile,
    posterior_density_curve,
    window_probability,
)
from .config import ExperimentConfig
from .report import ReportBundle, emit_report
from .cli import run

__version__ = "0.1.0"

__all__ = [
    "QlabError",
    "NotSymmetricError",
    "NotPositiveDefiniteError",
    "DecompositionFailureError",
    "EmptyRegionError",
    "FullRegionError",
    "NotNormalizedError",
    "ZeroSuperpositionError",
    "DimensionCapExceededError",
    "ZeroOperatorError",
    "ConfigError",
    "DynamicalMatrix",
    "Region",
    "build_chain",
    "build_discrete_klein_gordon",
    "build_custom",
    "SpectralData",
    "LocalityReport",
    "spectral_decompose",
    "offblock_min_singular",
    "localizable_modes",
    "PhasePoint",
    "ComplexMode",
    "VacuumCovariances",
    "mode_inner",
    "z_map",
    "symplectic_form",
    "vacuum_weyl",
    "coherent_weyl",
    "superposition_weyl",
    "vacuum_covariance",
    "LocalityVerdict",
    "KnightVerdict",
    "LichtVerdict",
    "SamplerSpec",
    "DefectReport",
    "LichtReport",
    "one_quantum_weyl",
    "one_quantum_defect",
    "knight_verdict",
    "coherent_locality_check",
    "licht_pair_test",
    "FockSpace",
    "LocalPolynomial",
    "build_fock",
    "weyl_matrix",
    "vacuum_weyl_oracle",
    "one_quantum_state",
    "cyclicity_residuals",
    "random_local_polynomial",
    "separability_check",
    "WindowEvent",
    "window_probability",
    "conditional_moments",
    "deviation_profile",
    "posterior_density_curve",
    "ExperimentConfig",
    "ReportBundle",
    "emit_report",
    "run",
    "__version__",
]
