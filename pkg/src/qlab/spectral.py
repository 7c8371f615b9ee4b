"""Eigendecomposition, fractional powers, and region support analysis.

The frequency operator is the positive square root of the squared-frequency
matrix.  Everything downstream needs its powers +-1 and +-1/2, cached here,
plus two equivalent tests of whether a region supports any strictly
localizable one-quantum mode:

* the off-block test: the sub-block of the frequency operator with rows in
  the complement and columns in the region has a nontrivial kernel, i.e.
  some vector supported in the region stays supported there under the
  frequency operator;
* the stacked-kernel test: some mode vector has both its +1/2 and -1/2
  frequency-power images supported in the region.

The two kernels are in bijection (apply the +-1/2 powers), so the verdicts
must agree instance by instance; both are computed and reported so the
agreement can be checked rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DecompositionFailureError,
    EmptyRegionError,
    FullRegionError,
)
from .models import DynamicalMatrix, Region, _read_only

#: relative singular value threshold for rank decisions (vs sigma_max)
NONLOCALITY_RTOL = 1e-8

#: relative tolerance for the eigendecomposition reconstruction check
RECONSTRUCTION_RTOL = 1e-10

#: exponents of the frequency operator cached by spectral_decompose
CACHED_EXPONENTS = (1.0, 0.5, -0.5, -1.0)


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigendecomposition of a squared-frequency matrix with cached powers.

    ``eigenvalues`` are the ascending eigenvalues of the squared-frequency
    matrix; ``eigenvectors`` holds the orthonormal eigenvectors as columns.
    ``power(t)`` returns the frequency operator raised to ``t`` for
    ``t in CACHED_EXPONENTS``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        for name in ("matrix", "eigenvalues", "eigenvectors"):
            object.__setattr__(self, name, _read_only(np.array(getattr(self, name))))
        powers = {}
        for expo in CACHED_EXPONENTS:
            scaled = self.eigenvectors * self.eigenvalues ** (expo / 2.0)
            powers[expo] = _read_only(scaled @ self.eigenvectors.T)
        object.__setattr__(self, "_powers", powers)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def frequencies(self) -> np.ndarray:
        """Normal mode frequencies (square roots of the eigenvalues)."""
        return np.sqrt(self.eigenvalues)

    def power(self, exponent: float) -> np.ndarray:
        """Frequency operator raised to ``exponent`` (+-1 or +-1/2)."""
        try:
            return self._powers[exponent]
        except KeyError:
            raise KeyError(f"exponent {exponent} not cached; use one of {CACHED_EXPONENTS}")

    @property
    def omega(self) -> np.ndarray:
        return self._powers[1.0]

    @property
    def omega_sqrt(self) -> np.ndarray:
        return self._powers[0.5]

    @property
    def omega_inv_sqrt(self) -> np.ndarray:
        return self._powers[-0.5]

    @property
    def omega_inv(self) -> np.ndarray:
        return self._powers[-1.0]


@dataclass(frozen=True, eq=False)
class LocalityReport:
    """Support analysis of the frequency operator over a region.

    ``localizable_basis`` spans the mode vectors whose +-1/2 power images
    are both supported in the region; the computation runs over the reals
    (the stacked matrix is real, so the complex kernel is the
    complexification of the real one and has the same dimension), and the
    basis is returned as complex vectors.
    """

    region: Region
    sigma_min_offblock: float
    strongly_nonlocal: bool
    localizable_dim: int
    localizable_basis: tuple[np.ndarray, ...]


def spectral_decompose(m: DynamicalMatrix) -> SpectralData:
    """Eigendecompose a dynamical matrix; eigenpairs sorted ascending.

    Raises
    ------
    DecompositionFailureError
        If the eigensolver does not converge or the reconstruction
        ``V diag(lam) V^T`` misses the input beyond tolerance.
    """
    try:
        lam, vec = np.linalg.eigh(m.entries)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailureError(f"eigendecomposition failed: {exc}") from exc
    recon = (vec * lam) @ vec.T
    scale = float(np.linalg.norm(m.entries, 2))
    err = float(np.linalg.norm(recon - m.entries, 2))
    if err > RECONSTRUCTION_RTOL * scale:
        raise DecompositionFailureError(
            f"reconstruction error {err:g} exceeds {RECONSTRUCTION_RTOL * scale:g}"
        )
    return SpectralData(matrix=m.entries, eigenvalues=lam, eigenvectors=vec)


def _check_region(s: SpectralData, b: Region) -> Region:
    if b.n != s.n:
        raise ValueError(f"region is over {b.n} sites, system has {s.n}")
    if b.is_empty:
        raise EmptyRegionError("region has no sites")
    if b.is_full:
        raise FullRegionError("region complement has no sites")
    return b.complement()


def offblock_min_singular(s: SpectralData, b: Region) -> float:
    """Smallest singular value of the frequency-operator off-block.

    The block has rows in the region complement and columns in the region.
    When the region is larger than its complement the block is wider than
    tall, so its kernel is forced by shape; the singular spectrum of the
    map then contains structural zeros beyond what the thin SVD lists, and
    the returned minimum is exactly 0.
    """
    comp = _check_region(s, b)
    block = s.omega[np.ix_(comp.indices(), b.indices())]
    svals = np.linalg.svd(block, compute_uv=False)
    if block.shape[0] < block.shape[1]:
        return 0.0
    return float(svals[-1])


def localizable_modes(
    s: SpectralData, b: Region, tol: float = NONLOCALITY_RTOL
) -> LocalityReport:
    """Kernel of the stacked +-1/2 frequency-power rows over the complement.

    A mode vector in this kernel generates a one-quantum excitation that is
    exactly indistinguishable from the ground state outside the region.
    ``localizable_dim`` counts singular values below ``tol * sigma_max``
    (structural zeros included when the stack has fewer rows than columns);
    the report also carries the off-block singular value and the strong
    non-locality verdict so the two tests can be cross-checked.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    comp = _check_region(s, b)
    rows = comp.indices()
    stacked = np.vstack([s.omega_sqrt[rows, :], s.omega_inv_sqrt[rows, :]])
    _, svals, vt = np.linalg.svd(stacked, full_matrices=True)
    n = s.n
    padded = np.zeros(n)
    padded[: svals.size] = svals
    sigma_max = padded[0]
    dim = int(np.sum(padded <= tol * sigma_max))
    basis = tuple(
        _read_only(vt[n - dim + k].astype(complex)) for k in range(dim)
    )

    sigma_min = offblock_min_singular(s, b)
    omega_scale = float(s.frequencies[-1])
    return LocalityReport(
        region=b,
        sigma_min_offblock=sigma_min,
        strongly_nonlocal=bool(sigma_min > tol * omega_scale),
        localizable_dim=dim,
        localizable_basis=basis,
    )
