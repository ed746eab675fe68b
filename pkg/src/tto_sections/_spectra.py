"""Spectral sets of section matrices and their Hausdorff distances."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
from scipy import linalg
from scipy.spatial import distance

from tto_sections._errors import DomainError, SpectralModeError
from tto_sections._hardy import OperatorMatrix, spectral_norm

logger = logging.getLogger(__name__)

SELFADJOINT_TOLERANCE = 1e-10

# Grid points per batched SVD call.
BATCH = 512


class SpectralMode(str, Enum):
    SELFADJOINT_EIGEN = "selfadjoint-eigen"
    SINGULAR = "singular"


class Resolution(str, Enum):
    EXACT = "exact"
    GRID = "grid"


@dataclass(frozen=True, eq=False)
class SpectralSet:
    """A finite set of points in the plane and how it was obtained."""

    points: np.ndarray
    resolution: Resolution = Resolution.EXACT
    coverage_warning: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", np.asarray(self.points, dtype=complex).ravel())

    def __len__(self) -> int:
        return self.points.size

    @property
    def is_empty(self) -> bool:
        return self.points.size == 0

    def as_plane(self) -> np.ndarray:
        """(len, 2) array of real and imaginary parts."""
        return np.column_stack((self.points.real, self.points.imag))


@dataclass(frozen=True)
class ComplexGrid:
    """Uniform ``resolution`` x ``resolution`` grid over a rectangle of the plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    resolution: int = 101

    def __post_init__(self) -> None:
        if self.resolution < 2:
            raise DomainError(f"grid resolution must be >= 2, got {self.resolution}")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DomainError("grid rectangle is empty")

    @classmethod
    def covering(cls, radius: float, resolution: int = 101, center: complex = 0j) -> "ComplexGrid":
        """Square grid covering the disk of ``radius`` about ``center``."""
        return cls(
            center.real - radius,
            center.real + radius,
            center.imag - radius,
            center.imag + radius,
            resolution,
        )

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.re_min, self.re_max, self.resolution),
            np.linspace(self.im_min, self.im_max, self.resolution),
        )

    @property
    def points(self) -> np.ndarray:
        re, im = self.axes()
        return (re[None, :] + 1j * im[:, None]).ravel()

    def boundary_mask(self) -> np.ndarray:
        edge = np.zeros((self.resolution, self.resolution), dtype=bool)
        edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
        return edge.ravel()


def _entries(A: Union[OperatorMatrix, np.ndarray]) -> np.ndarray:
    entries = A.entries if isinstance(A, OperatorMatrix) else np.asarray(A, dtype=complex)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DomainError(f"spectral computations need a square matrix, got shape {entries.shape}")
    return entries


def spectra(A: Union[OperatorMatrix, np.ndarray], mode: Union[SpectralMode, str] = SpectralMode.SINGULAR) -> SpectralSet:
    """Eigenvalues of a self-adjoint matrix (ascending) or singular values (ascending)."""
    mode = SpectralMode(mode)
    entries = _entries(A)
    if entries.size == 0:
        raise DomainError("empty matrix has no spectrum")
    if mode is SpectralMode.SELFADJOINT_EIGEN:
        asymmetry = spectral_norm(entries - entries.conj().T)
        if asymmetry >= SELFADJOINT_TOLERANCE:
            raise SpectralModeError(f"matrix is not self-adjoint (||A - A*|| = {asymmetry:.3e})")
        values = linalg.eigvalsh((entries + entries.conj().T) / 2)
    else:
        values = linalg.svdvals(entries)[::-1]
    return SpectralSet(points=values.astype(complex))


def smallest_singular_values(entries: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """sigma_min(A - z I) for every z in ``shifts``."""
    n = entries.shape[0]
    identity = np.eye(n, dtype=complex)
    result = np.empty(shifts.size)
    for start in range(0, shifts.size, BATCH):
        block = shifts[start : start + BATCH]
        stack = entries[None, :, :] - block[:, None, None] * identity[None, :, :]
        result[start : start + BATCH] = np.linalg.svd(stack, compute_uv=False)[:, -1]
    return result


def pseudospectrum_grid(
    A: Union[OperatorMatrix, np.ndarray],
    eps: float,
    grid: Optional[ComplexGrid] = None,
) -> SpectralSet:
    """Grid points z with sigma_min(A - z I) <= eps.

    The default grid is the square over the disk of radius ||A|| + 2 eps.  A
    set that touches the grid boundary is flagged with ``coverage_warning``.
    """
    if eps <= 0:
        raise DomainError(f"eps must be > 0, got {eps!r}")
    entries = _entries(A)
    if grid is None:
        grid = ComplexGrid.covering(spectral_norm(entries) + 2 * eps)
    points = grid.points
    inside = smallest_singular_values(entries, points) <= eps
    coverage_warning = bool(np.any(inside & grid.boundary_mask()))
    if coverage_warning:
        logger.warning("eps=%s pseudospectrum reaches the boundary of the grid", eps)
    return SpectralSet(points=points[inside], resolution=Resolution.GRID, coverage_warning=coverage_warning)


def hausdorff(Mset: SpectralSet, Nset: SpectralSet) -> float:
    """max(sup_{x in M} dist(x, N), sup_{y in N} dist(y, M))."""
    if Mset.is_empty or Nset.is_empty:
        raise DomainError("Hausdorff distance needs two nonempty sets")
    M, N = Mset.as_plane(), Nset.as_plane()
    return float(max(distance.directed_hausdorff(M, N)[0], distance.directed_hausdorff(N, M)[0]))


def is_nonincreasing(trace: Sequence[float], slack: float = 0.1, floor: float = 0.0) -> bool:
    """Each value is at most (1 + slack) times its predecessor, or below ``floor``."""
    return all(b <= (1.0 + slack) * a or b <= floor for a, b in zip(trace, trace[1:]))
