"""Dynamical matrices of finite harmonic systems, and site regions.

A system of n coupled oscillators is fixed by a symmetric positive definite
n x n matrix of squared frequencies.  The builders below cover pinned
oscillator chains (open or periodic), finite-difference discretizations of
the massive wave equation on an interval, and hand-written couplings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefiniteError, NotSymmetricError

#: maximum allowed asymmetry |M - M^T| for hand-written input matrices
SYMMETRY_TOL = 1e-12

#: positive definiteness threshold, relative to the largest matrix entry
SPD_RTOL = 1e-10


def _read_only(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DynamicalMatrix:
    """Symmetric positive definite matrix of squared frequencies.

    Construction validates both invariants: the entries are required to be
    exactly symmetric (builders symmetrize before constructing), and the
    smallest eigenvalue must exceed ``SPD_RTOL * max|entry|``.  The second
    guard protects the inverse square root computed downstream.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] == 0:
            raise ValueError("system must have at least one site")
        if not np.array_equal(m, m.T):
            raise NotSymmetricError("entries must be exactly symmetric")
        scale = float(np.max(np.abs(m)))
        smallest = float(np.linalg.eigvalsh(m)[0])
        if smallest <= SPD_RTOL * scale:
            raise NotPositiveDefiniteError(
                f"smallest eigenvalue {smallest:g} is at or below the "
                f"positivity threshold {SPD_RTOL * scale:g}"
            )
        object.__setattr__(self, "entries", _read_only(m))

    @property
    def n(self) -> int:
        """Number of sites."""
        return self.entries.shape[0]


@dataclass(frozen=True)
class Region:
    """A subset of the site indices ``{0, ..., n-1}``.

    Indices are 0-based.  ``members`` is kept sorted and duplicate-free.
    """

    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("region needs a system with at least one site")
        members = tuple(sorted(int(j) for j in self.members))
        if len(set(members)) != len(members):
            raise ValueError(f"duplicate site indices in {members}")
        if members and (members[0] < 0 or members[-1] >= self.n):
            raise ValueError(f"site indices {members} out of range [0, {self.n})")
        object.__setattr__(self, "members", members)

    def complement(self) -> "Region":
        inside = set(self.members)
        return Region(self.n, tuple(j for j in range(self.n) if j not in inside))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def is_full(self) -> bool:
        return len(self.members) == self.n

    def indices(self) -> np.ndarray:
        return np.array(self.members, dtype=int)


def _path_laplacian(n: int) -> np.ndarray:
    lap = 2.0 * np.eye(n)
    lap[0, 0] = lap[-1, -1] = 1.0
    idx = np.arange(n - 1)
    lap[idx, idx + 1] = -1.0
    lap[idx + 1, idx] = -1.0
    return lap


def _cycle_laplacian(n: int) -> np.ndarray:
    lap = 2.0 * np.eye(n)
    idx = np.arange(n)
    lap[idx, (idx + 1) % n] += -1.0
    lap[(idx + 1) % n, idx] += -1.0
    return lap


def build_chain(
    n: int,
    coupling: float = 1.0,
    pinning: float = 1.0,
    periodic: bool = False,
) -> DynamicalMatrix:
    """Pinned oscillator chain: ``pinning * I + coupling * L``.

    ``L`` is the graph Laplacian of the path (open chain) or the cycle
    (periodic chain), so nearest-neighbour couplings enter with a negative
    off-diagonal sign.  ``coupling = 0`` is allowed and gives the uncoupled
    diagonal control case.

    Parameters
    ----------
    n : int
        Number of sites, at least 1.
    coupling : float
        Nearest-neighbour spring constant, nonnegative.
    pinning : float
        On-site restoring constant, nonnegative.  Must be positive for a
        periodic chain, whose Laplacian has the constant zero mode.
    periodic : bool
        Close the chain into a ring.
    """
    if n < 1:
        raise ValueError("chain needs at least one site")
    if coupling < 0:
        raise ValueError("coupling must be nonnegative")
    if pinning < 0:
        raise ValueError("pinning must be nonnegative")
    if periodic and pinning == 0:
        raise NotPositiveDefiniteError(
            "periodic chain with zero pinning has a zero mode"
        )
    if n == 1:
        lap = np.zeros((1, 1))
    elif periodic:
        lap = _cycle_laplacian(n)
    else:
        lap = _path_laplacian(n)
    return DynamicalMatrix(pinning * np.eye(n) + coupling * lap)


def build_discrete_klein_gordon(
    grid_points: int,
    mass: float,
    spacing: float = 1.0,
) -> DynamicalMatrix:
    """Dirichlet finite-difference massive wave operator ``m^2 I + L/h^2``.

    Parameters
    ----------
    grid_points : int
        Interior grid points, at least 2.
    mass : float
        Mass parameter, strictly positive (keeps the spectrum away from 0
        on any grid).
    spacing : float
        Grid spacing ``h``, strictly positive.
    """
    if grid_points < 2:
        raise ValueError("need at least two grid points")
    if mass <= 0:
        raise ValueError("mass must be positive")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    lap = 2.0 * np.eye(grid_points)
    idx = np.arange(grid_points - 1)
    lap[idx, idx + 1] = -1.0
    lap[idx + 1, idx] = -1.0
    return DynamicalMatrix(mass**2 * np.eye(grid_points) + lap / spacing**2)


def build_custom(entries) -> DynamicalMatrix:
    """Validate a hand-written squared-frequency matrix.

    The input must be square and symmetric within ``SYMMETRY_TOL``; it is
    then symmetrized exactly as ``(M + M^T)/2`` before the positive
    definiteness check.
    """
    m = np.array(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > SYMMETRY_TOL:
        raise NotSymmetricError(f"asymmetry {asym:g} exceeds {SYMMETRY_TOL:g}")
    return DynamicalMatrix((m + m.T) / 2.0)
