"""Truncated Fock space: explicit matrices for site operators and oracles.

Each normal mode keeps its lowest ``truncation`` levels, so an n-mode system
lives on a dense tensor-product space of dimension ``truncation ** n``.
Site displacement and momentum operators are frequency-weighted mixtures of
the per-mode ladder matrices; everything downstream (displacement
operators, span residuals, projected norms) is plain dense linear algebra.
The module exists to cross-validate the closed-form expectation values
elsewhere in the package, so nothing here may use those formulas.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import scipy.linalg

from .errors import DimensionCapExceededError, EmptyRegionError, ZeroOperatorError
from .measure import WindowEvent
from .models import Region, _read_only
from .spectral import SpectralData

#: largest total dimension for which dense matrices stay affordable
DIMENSION_CAP = 20000

#: column drop tolerance for the span orthonormalization, relative to the
#: largest column norm
SPAN_DROP_RTOL = 1e-10


def _lowering(truncation: int) -> np.ndarray:
    a = np.zeros((truncation, truncation))
    ks = np.arange(1, truncation)
    a[ks - 1, ks] = np.sqrt(ks)
    return a


@dataclass(frozen=True, eq=False)
class FockSpace:
    """Dense truncated multimode bosonic space for one harmonic system.

    Mode 0 is the slowest tensor index: the basis state with occupations
    ``(k_0, ..., k_{m-1})`` sits at index ``sum_j k_j * N**(m-1-j)``.
    ``site_q[j]`` and ``site_p[j]`` are the displacement and momentum
    matrices of site ``j``; ``hamiltonian`` is the normal-ordered energy,
    zero on the ground state by construction.
    """

    n_modes: int
    truncation: int
    mode_frequencies: np.ndarray
    mode_matrix: np.ndarray
    site_q: tuple[np.ndarray, ...]
    site_p: tuple[np.ndarray, ...]
    vacuum: np.ndarray
    hamiltonian: np.ndarray

    @property
    def dimension(self) -> int:
        return self.truncation**self.n_modes

    def occupations(self, index: int) -> tuple[int, ...]:
        """Per-mode level tuple of a basis state index."""
        levels = []
        for m in range(self.n_modes - 1, -1, -1):
            levels.append(index % self.truncation)
            index //= self.truncation
        return tuple(reversed(levels))

    def basis_label(self, index: int) -> str:
        return "|" + ",".join(str(k) for k in self.occupations(index)) + ">"

    def basis_index(self, occupations: Sequence[int]) -> int:
        if len(occupations) != self.n_modes:
            raise ValueError("need one occupation number per mode")
        index = 0
        for k in occupations:
            if not 0 <= k < self.truncation:
                raise ValueError(f"occupation {k} outside [0, {self.truncation})")
            index = index * self.truncation + int(k)
        return index

    def max_level(self, index: int) -> int:
        return max(self.occupations(index))


def _embed(op: np.ndarray, mode: int, n_modes: int, truncation: int) -> np.ndarray:
    eye = np.eye(truncation)
    out = np.array([[1.0 + 0j]]) if np.iscomplexobj(op) else np.array([[1.0]])
    for m in range(n_modes):
        out = np.kron(out, op if m == mode else eye)
    return out


def build_fock(s: SpectralData, truncation: int) -> FockSpace:
    """Build the truncated space for a spectral decomposition.

    Raises
    ------
    DimensionCapExceededError
        If ``truncation ** n_modes`` exceeds ``DIMENSION_CAP``.
    """
    if truncation < 2:
        raise ValueError("need at least two levels per mode")
    n = s.n
    dim = truncation**n
    if dim > DIMENSION_CAP:
        raise DimensionCapExceededError(
            f"dimension {dim} exceeds cap {DIMENSION_CAP}"
        )
    freqs = s.frequencies
    v = s.eigenvectors
    lower = _lowering(truncation)
    raise_ = lower.T
    mode_q = [
        _embed((lower + raise_) / np.sqrt(2.0 * freqs[m]), m, n, truncation)
        for m in range(n)
    ]
    mode_p = [
        _embed(1j * np.sqrt(freqs[m] / 2.0) * (raise_ - lower), m, n, truncation)
        for m in range(n)
    ]
    site_q = tuple(
        _read_only(sum(v[j, m] * mode_q[m] for m in range(n)).astype(complex))
        for j in range(n)
    )
    site_p = tuple(
        _read_only(sum(v[j, m] * mode_p[m] for m in range(n)).astype(complex))
        for j in range(n)
    )
    vacuum = np.zeros(dim)
    vacuum[0] = 1.0

    levels = np.zeros((dim, n), dtype=int)
    idx = np.arange(dim)
    for m in range(n - 1, -1, -1):
        levels[:, m] = idx % truncation
        idx = idx // truncation
    energies = levels @ freqs
    return FockSpace(
        n_modes=n,
        truncation=truncation,
        mode_frequencies=_read_only(np.array(freqs)),
        mode_matrix=_read_only(np.array(v)),
        site_q=site_q,
        site_p=site_p,
        vacuum=_read_only(vacuum),
        hamiltonian=_read_only(np.diag(energies)),
    )


def weyl_matrix(f: FockSpace, xi) -> np.ndarray:
    """Displacement operator ``exp(a^dag(xi) - a(xi))`` on the truncated space.

    The generator splits into commuting per-mode pieces, so the exponential
    factorizes exactly into a tensor product of single-mode exponentials.
    Warns when ``|xi|`` is large enough for the truncation tail to matter.
    """
    values = np.asarray(getattr(xi, "values", xi), dtype=complex)
    if values.size != f.n_modes:
        raise ValueError("mode vector dimension mismatch")
    norm = float(np.linalg.norm(values))
    if norm > np.sqrt(f.truncation) / 4.0:
        warnings.warn(
            f"displacement norm {norm:.3g} is large for truncation "
            f"{f.truncation}; tail error may dominate",
            stacklevel=2,
        )
    coeffs = f.mode_matrix.T @ values
    lower = _lowering(f.truncation).astype(complex)
    out = np.array([[1.0 + 0j]])
    for c in coeffs:
        gen = c * lower.T.conj() - np.conj(c) * lower
        out = np.kron(out, scipy.linalg.expm(gen))
    return out


def vacuum_weyl_oracle(f: FockSpace, xi) -> complex:
    """Ground-state expectation of the truncated displacement operator."""
    w = weyl_matrix(f, xi)
    return complex(f.vacuum @ (w @ f.vacuum))


def one_quantum_state(f: FockSpace, xi) -> np.ndarray:
    """Vector ``a^dag(xi)|0>``; unit norm whenever ``xi`` has unit norm."""
    values = np.asarray(getattr(xi, "values", xi), dtype=complex)
    if values.size != f.n_modes:
        raise ValueError("mode vector dimension mismatch")
    coeffs = f.mode_matrix.T @ values
    state = np.zeros(f.dimension, dtype=complex)
    for m, c in enumerate(coeffs):
        state[f.truncation ** (f.n_modes - 1 - m)] = c
    return state


def _monomial_exponents(members: tuple[int, ...], max_degree: int):
    """All per-site (q-power, p-power) assignments with total at most max_degree."""
    assignments = [()]
    for _ in members:
        assignments = [
            prev + ((k, l),)
            for prev in assignments
            for k in range(max_degree + 1)
            for l in range(max_degree + 1)
            if sum(a + b for a, b in prev) + k + l <= max_degree
        ]
    return assignments


def _apply_monomial(
    f: FockSpace, members: tuple[int, ...], exponents, vec: np.ndarray
) -> np.ndarray:
    """Apply the ordered product of per-site q- and p-powers to ``vec``.

    Per site the q-powers stand left of the p-powers, sites ascending;
    operators on different sites commute, so only the within-site order is
    binding.
    """
    out = vec.astype(complex)
    for site, (k, l) in zip(members, exponents):
        for _ in range(l):
            out = f.site_p[site] @ out
        for _ in range(k):
            out = f.site_q[site] @ out
    return out


def cyclicity_residuals(
    f: FockSpace, b: Region, max_degree: int
) -> list[tuple[str, float]]:
    """Distance of each basis state from the local monomial span of the vacuum.

    The span collects every ordered product of region-site displacement and
    momentum powers of total degree at most ``max_degree`` applied to the
    ground state.  After a rank-revealing orthonormalization (column-pivoted
    QR with relative drop tolerance ``SPAN_DROP_RTOL``), the residual of a
    basis state is the norm of its component orthogonal to the span.
    Growing ``max_degree`` can only grow the span, so residuals are
    non-increasing in the degree.
    """
    if b.n != f.n_modes:
        raise ValueError("region is over a different number of sites")
    if b.is_empty:
        raise EmptyRegionError("region has no sites")
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    members = b.members
    columns = [
        _apply_monomial(f, members, expo, f.vacuum)
        for expo in _monomial_exponents(members, max_degree)
    ]
    matrix = np.column_stack(columns)
    q, r, _ = scipy.linalg.qr(matrix, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    col_scale = float(np.max(np.linalg.norm(matrix, axis=0)))
    rank = int(np.sum(diag > SPAN_DROP_RTOL * col_scale))
    basis = q[:, :rank]
    # residual of basis state e_i is column i of (I - P_span); forming the
    # residual vectors avoids the sqrt(1 - |row|^2) cancellation blow-up,
    # and blocking keeps peak memory at O(dimension x block)
    dim = f.dimension
    residuals = np.empty(dim)
    block = max(1, min(dim, 4_194_304 // dim))
    for start in range(0, dim, block):
        width = min(block, dim - start)
        cols = -(basis @ basis[start : start + width].conj().T)
        cols[start + np.arange(width), np.arange(width)] += 1.0
        residuals[start : start + width] = np.linalg.norm(cols, axis=0)
    return [(f.basis_label(i), float(residuals[i])) for i in range(dim)]


@dataclass(frozen=True)
class LocalPolynomial:
    """Polynomial in the displacement and momentum operators of fixed sites.

    ``terms`` is a sequence of ``(coefficient, factors)`` pairs where each
    factor is ``(site, "Q")`` or ``(site, "P")``; factors apply right to
    left, matching operator products.
    """

    terms: tuple[tuple[complex, tuple[tuple[int, str], ...]], ...]

    def __post_init__(self):
        cleaned = []
        for coeff, factors in self.terms:
            factors = tuple((int(site), str(kind)) for site, kind in factors)
            for _, kind in factors:
                if kind not in ("Q", "P"):
                    raise ValueError(f"unknown factor kind {kind!r}")
            cleaned.append((complex(coeff), factors))
        object.__setattr__(self, "terms", tuple(cleaned))

    @property
    def sites(self) -> set[int]:
        return {site for _, factors in self.terms for site, _ in factors}

    @property
    def is_zero(self) -> bool:
        return all(coeff == 0 for coeff, _ in self.terms) or not self.terms


def random_local_polynomial(
    b: Region, max_degree: int, rng: np.random.Generator
) -> LocalPolynomial:
    """Random polynomial over the region's canonical monomials.

    Coefficients are complex standard normal on every ordered monomial of
    total degree at most ``max_degree`` (q-powers left of p-powers per
    site, sites ascending).
    """
    terms = []
    for expo in _monomial_exponents(b.members, max_degree):
        factors = []
        for site, (k, l) in zip(b.members, expo):
            factors.extend([(site, "Q")] * k)
            factors.extend([(site, "P")] * l)
        coeff = complex(rng.standard_normal(), rng.standard_normal())
        terms.append((coeff, tuple(factors)))
    return LocalPolynomial(tuple(terms))


def separability_check(
    f: FockSpace, b: Region, op_spec: Union[LocalPolynomial, WindowEvent]
) -> float:
    """Norm of a local operator applied to the ground state.

    Accepts a polynomial in the region's site operators or a sharp spectral
    window of one region-site displacement.  Windows are realized by
    eigendecomposing the truncated site matrix and keeping the eigenvalue
    range; with a finite spectrum a window far outside the spectral range
    can come back exactly zero.
    """
    if b.is_empty:
        raise EmptyRegionError("region has no sites")
    inside = set(b.members)
    if isinstance(op_spec, WindowEvent):
        if op_spec.site not in inside:
            raise ValueError("window site is outside the region")
        evals, evecs = np.linalg.eigh(f.site_q[op_spec.site])
        amplitudes = evecs.conj().T @ f.vacuum
        mask = (evals >= op_spec.lo) & (evals <= op_spec.hi)
        return float(np.sqrt(np.sum(np.abs(amplitudes[mask]) ** 2)))
    if op_spec.is_zero:
        raise ZeroOperatorError("all polynomial coefficients are zero")
    if not op_spec.sites <= inside:
        raise ValueError("polynomial touches sites outside the region")
    result = np.zeros(f.dimension, dtype=complex)
    for coeff, factors in op_spec.terms:
        if coeff == 0:
            continue
        vec = f.vacuum.astype(complex)
        for site, kind in reversed(factors):
            op = f.site_q[site] if kind == "Q" else f.site_p[site]
            vec = op @ vec
        result += coeff * vec
    return float(np.linalg.norm(result))
