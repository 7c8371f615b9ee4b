"""Exception types raised by qlab."""


class QlabError(Exception):
    """Base class for all qlab errors."""


class NotSymmetricError(QlabError):
    """Input matrix is not symmetric within tolerance."""


class NotPositiveDefiniteError(QlabError):
    """Matrix has an eigenvalue at or below the positivity threshold."""


class DecompositionFailureError(QlabError):
    """Eigendecomposition did not converge or failed verification."""


class EmptyRegionError(QlabError):
    """Operation requires a region with at least one site."""


class FullRegionError(QlabError):
    """Operation requires a region with a nonempty complement."""


class NotNormalizedError(QlabError):
    """Mode vector must have unit norm."""


class ZeroSuperpositionError(QlabError):
    """Superposition coefficients produce the zero vector."""


class DimensionCapExceededError(QlabError):
    """Requested truncated space exceeds the dense-dimension budget."""


class ZeroOperatorError(QlabError):
    """Local operator description has all coefficients equal to zero."""


class ConfigError(QlabError):
    """Experiment configuration is missing, malformed, or inconsistent."""
