"""Numerics on the unit circle and in the Hardy space.

Uniform circle grids, discrete Fourier analysis of symbols, the flip
a(t) -> a(1/t), and classical Toeplitz and Hankel matrices on the Fourier
window 0..N-1 of H^2.  Products, sums and flips of symbols act on the
coefficient windows and keep track of a rigorous bound on the dropped tail.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

import numpy as np
from scipy import fft, linalg

from tto_sections._errors import AliasingError, DomainError

logger = logging.getLogger(__name__)

FOURIER = "fourier"

# Tail bounds below this are treated as exact.
TAIL_TOLERANCE = 1e-12

# Coefficients below this fraction of the largest one do not count toward the degree.
DEGREE_THRESHOLD = 1e-14

# Largest grid the adaptive analysis may reach.
MAX_GRID = 2**16


@dataclass(frozen=True)
class CircleGrid:
    """M uniform points t_m = exp(2 pi i m / M) with weights 1/M."""

    M: int

    def __post_init__(self) -> None:
        if self.M < 2:
            raise DomainError(f"a circle grid needs M >= 2, got {self.M}")

    @classmethod
    def for_window(cls, N_F: int) -> "CircleGrid":
        """Smallest power of two that is at least 8 * N_F (and 16)."""
        target = max(8 * N_F, 16)
        return cls(M=1 << (target - 1).bit_length())

    @property
    def points(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.M) / self.M)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.M, 1.0 / self.M)

    def refined(self) -> "CircleGrid":
        return CircleGrid(M=2 * self.M)

    def check_window(self, N_F: int) -> None:
        if N_F < 0:
            raise DomainError(f"coefficient window must be >= 0, got {N_F}")
        if 2 * N_F >= self.M:
            raise AliasingError(f"window N_F = {N_F} does not fit below M/2 for M = {self.M}")


def _synthesize(coeffs: np.ndarray, grid: CircleGrid) -> np.ndarray:
    """Values on the grid of the trigonometric polynomial with centred coefficients ``coeffs``."""
    window = (len(coeffs) - 1) // 2
    grid.check_window(window)
    spectrum = np.zeros(grid.M, dtype=complex)
    spectrum[np.arange(-window, window + 1) % grid.M] = coeffs
    return grid.M * fft.ifft(spectrum)


@dataclass(frozen=True, eq=False)
class Symbol:
    """A function on the circle: grid samples plus the Fourier window -N_F..N_F.

    ``coeffs[j + N_F]`` holds the coefficient of t^j.  ``tail_bound`` bounds the
    sum of the moduli of the coefficients outside the window.
    """

    grid: CircleGrid
    samples: np.ndarray
    coeffs: np.ndarray
    tail_bound: float = 0.0
    label: str = ""

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=complex)
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if samples.shape != (self.grid.M,):
            raise DomainError(f"expected {self.grid.M} samples, got shape {samples.shape}")
        if coeffs.ndim != 1 or len(coeffs) % 2 != 1:
            raise DomainError("coefficient window must have odd length 2 * N_F + 1")
        self.grid.check_window((len(coeffs) - 1) // 2)
        if self.tail_bound < 0:
            raise DomainError(f"tail bound must be >= 0, got {self.tail_bound!r}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "coeffs", coeffs)

    # -- construction --------------------------------------------------------

    @classmethod
    def from_coefficients(
        cls,
        coefficients: Mapping[int, complex],
        *,
        window: Optional[int] = None,
        label: str = "",
    ) -> "Symbol":
        """The trigonometric polynomial sum_j c_j t^j; exact, so the tail bound is 0."""
        reach = max((abs(int(j)) for j in coefficients), default=0)
        window = reach if window is None else window
        if window < reach:
            raise DomainError(f"window {window} is smaller than the degree {reach}")
        coeffs = np.zeros(2 * window + 1, dtype=complex)
        for j, c in coefficients.items():
            coeffs[int(j) + window] += complex(c)
        grid = CircleGrid.for_window(window)
        return cls(grid=grid, samples=_synthesize(coeffs, grid), coeffs=coeffs, label=label)

    @classmethod
    def constant(cls, value: complex = 1.0) -> "Symbol":
        return cls.from_coefficients({0: value}, label=repr(value))

    @classmethod
    def monomial(cls, power: int) -> "Symbol":
        return cls.from_coefficients({power: 1.0}, label=f"t^{power}")

    # -- coefficient access --------------------------------------------------

    @property
    def window(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def coefficient(self, j: int) -> complex:
        if abs(j) > self.window:
            return 0j
        return complex(self.coeffs[j + self.window])

    def coefficients(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices, dtype=int)
        values = np.zeros(indices.shape, dtype=complex)
        inside = np.abs(indices) <= self.window
        values[inside] = self.coeffs[indices[inside] + self.window]
        return values

    def _reach(self, sign: int) -> int:
        scale = np.max(np.abs(self.coeffs), initial=0.0)
        if scale == 0.0:
            return 0
        side = self.coeffs[self.window :] if sign > 0 else self.coeffs[self.window :: -1]
        significant = np.nonzero(np.abs(side) > DEGREE_THRESHOLD * scale)[0]
        return int(significant[-1]) if significant.size else 0

    @property
    def analytic_degree(self) -> int:
        """Largest j >= 0 with a significant coefficient."""
        return self._reach(+1)

    @property
    def coanalytic_degree(self) -> int:
        """Largest j >= 0 with a significant coefficient at -j."""
        return self._reach(-1)

    @property
    def degree(self) -> int:
        return max(self.analytic_degree, self.coanalytic_degree)

    @property
    def truncated(self) -> bool:
        return self.tail_bound > TAIL_TOLERANCE

    def norm_bound(self) -> float:
        """Upper bound on the sup norm: sum of |coefficients| plus the tail."""
        return math.fsum(np.abs(self.coeffs)) + self.tail_bound

    def is_real(self, tol: float = 1e-12) -> bool:
        """Conjugate symmetry of the coefficient window."""
        return bool(np.max(np.abs(self.coeffs - np.conj(self.coeffs[::-1])), initial=0.0) <= tol)

    def is_analytic(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.coeffs[: self.window]), initial=0.0) <= tol)

    def evaluate(self, points: Union[complex, np.ndarray]) -> np.ndarray:
        """Evaluate the windowed trigonometric polynomial at unimodular points."""
        t = np.asarray(points, dtype=complex)
        return np.polynomial.polynomial.polyval(t, self.coeffs) * t ** (-self.window)

    def min_real_value(self, resolution: int = 4096) -> float:
        """Minimum of Re a over a fine uniform grid (plus the sample grid)."""
        fine = CircleGrid(max(resolution, self.grid.M))
        return float(min(self.evaluate(fine.points).real.min(), self.samples.real.min()))

    # -- transformations -----------------------------------------------------

    def with_window(self, N_F: int) -> "Symbol":
        """Truncate or zero-pad the coefficient window; dropped mass goes to the tail bound."""
        if N_F == self.window:
            return self
        coeffs = self.coefficients(np.arange(-N_F, N_F + 1))
        dropped = math.fsum(np.abs(self.coeffs)) - math.fsum(np.abs(coeffs)) if N_F < self.window else 0.0
        grid = self.grid if 2 * N_F < self.grid.M else CircleGrid.for_window(N_F)
        samples = self.samples if grid == self.grid and N_F >= self.window else _synthesize(coeffs, grid)
        return Symbol(
            grid=grid,
            samples=samples,
            coeffs=coeffs,
            tail_bound=self.tail_bound + max(dropped, 0.0),
            label=self.label,
        )

    def on_grid(self, grid: CircleGrid) -> "Symbol":
        """The same coefficient window sampled on another grid."""
        if grid == self.grid:
            return self
        return Symbol(
            grid=grid,
            samples=_synthesize(self.coeffs, grid),
            coeffs=self.coeffs,
            tail_bound=self.tail_bound,
            label=self.label,
        )

    def conj(self) -> "Symbol":
        return Symbol(
            grid=self.grid,
            samples=np.conj(self.samples),
            coeffs=np.conj(self.coeffs[::-1]),
            tail_bound=self.tail_bound,
            label=f"conj({self.label})",
        )

    def __mul__(self, other: Union["Symbol", complex, float]) -> "Symbol":
        if not isinstance(other, Symbol):
            c = complex(other)
            return Symbol(
                grid=self.grid,
                samples=c * self.samples,
                coeffs=c * self.coeffs,
                tail_bound=abs(c) * self.tail_bound,
                label=f"{c!r}*{self.label}",
            )
        coeffs = np.convolve(self.coeffs, other.coeffs)
        window = (len(coeffs) - 1) // 2
        if self.grid == other.grid and 2 * window < self.grid.M:
            grid, samples = self.grid, self.samples * other.samples
        else:
            grid = CircleGrid(max(self.grid.M, other.grid.M, CircleGrid.for_window(window).M))
            samples = _synthesize(coeffs, grid)
        tail = (
            self.tail_bound * (math.fsum(np.abs(other.coeffs)) + other.tail_bound)
            + other.tail_bound * math.fsum(np.abs(self.coeffs))
        )
        return Symbol(grid=grid, samples=samples, coeffs=coeffs, tail_bound=tail, label=f"({self.label})*({other.label})")

    __rmul__ = __mul__

    def __add__(self, other: "Symbol") -> "Symbol":
        window = max(self.window, other.window)
        left, right = self.with_window(window), other.with_window(window)
        grid = CircleGrid(max(left.grid.M, right.grid.M))
        samples = left.samples + right.samples if left.grid == right.grid else _synthesize(left.coeffs + right.coeffs, grid)
        return Symbol(
            grid=grid,
            samples=samples,
            coeffs=left.coeffs + right.coeffs,
            tail_bound=left.tail_bound + right.tail_bound,
            label=f"{self.label}+{other.label}",
        )

    def __neg__(self) -> "Symbol":
        return self * -1.0

    def __sub__(self, other: "Symbol") -> "Symbol":
        return self + (-other)


def analyze(
    f: Union[Callable[[np.ndarray], np.ndarray], np.ndarray],
    grid: Optional[CircleGrid] = None,
    N_F: int = 16,
    *,
    label: str = "",
) -> Symbol:
    """Discrete Fourier analysis of ``f`` on a uniform grid.

    ``f`` is a callable evaluated at the grid points or an array of samples.
    Without an explicit grid, a callable is resampled on doubled grids until
    the upper quarter of the discrete spectrum is below 1e-12, so that the
    window coefficients carry no visible aliasing.
    """
    adaptive = grid is None and callable(f)
    grid = grid if grid is not None else CircleGrid.for_window(N_F)
    grid.check_window(N_F)

    while True:
        if callable(f):
            samples = np.asarray(f(grid.points), dtype=complex)
        else:
            samples = np.asarray(f, dtype=complex)
        if samples.shape != (grid.M,):
            raise DomainError(f"expected {grid.M} samples, got shape {samples.shape}")
        spectrum = fft.fft(samples) / grid.M
        half = grid.M // 2
        high = np.abs(spectrum[grid.M // 4 : grid.M - grid.M // 4 + 1]).max(initial=0.0)
        if not adaptive or high <= 1e-12 or grid.M * 2 > MAX_GRID:
            break
        logger.debug("refining analysis grid %d -> %d (high band %.3e)", grid.M, 2 * grid.M, high)
        grid = grid.refined()

    coeffs = spectrum[np.arange(-N_F, N_F + 1) % grid.M]
    outside = np.arange(N_F + 1, half + 1)
    band = np.abs(spectrum[outside % grid.M]).sum() + np.abs(spectrum[(-outside) % grid.M]).sum()
    if half in outside:
        band -= abs(spectrum[half])  # the Nyquist bin was counted twice
    tail_bound = float(band)
    if tail_bound > TAIL_TOLERANCE:
        logger.debug("symbol %s keeps a tail of %.3e outside |j| <= %d", label, tail_bound, N_F)
    return Symbol(grid=grid, samples=samples, coeffs=coeffs, tail_bound=tail_bound, label=label)


def flip(a: Symbol) -> Symbol:
    """The symbol t -> a(1/t); coefficients are reversed."""
    return Symbol(
        grid=a.grid,
        samples=np.roll(a.samples[::-1], 1),
        coeffs=a.coeffs[::-1].copy(),
        tail_bound=a.tail_bound,
        label=f"flip({a.label})",
    )


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A dense complex matrix together with the bases of its rows and columns.

    A basis tag is ``"fourier"`` for the window 0..N-1 of H^2 or the id of a
    model-space basis.
    """

    entries: np.ndarray
    row_basis: str = FOURIER
    col_basis: str = FOURIER
    truncated: bool = False

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2:
            raise DomainError(f"operator matrices are 2-D, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise DomainError("operator matrix has non-finite entries")
        object.__setattr__(self, "entries", entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.col_basis, self.row_basis, self.truncated)

    def leading(self, n: int) -> "OperatorMatrix":
        return OperatorMatrix(self.entries[:n, :n], self.row_basis, self.col_basis, self.truncated)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.col_basis != other.row_basis:
            raise DomainError(f"cannot compose {self.col_basis!r} columns with {other.row_basis!r} rows")
        return OperatorMatrix(
            self.entries @ other.entries,
            self.row_basis,
            other.col_basis,
            self.truncated or other.truncated,
        )

    def _check_compatible(self, other: "OperatorMatrix") -> None:
        if (self.row_basis, self.col_basis) != (other.row_basis, other.col_basis):
            raise DomainError("operator matrices live on different bases")

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_compatible(other)
        return OperatorMatrix(
            self.entries + other.entries, self.row_basis, self.col_basis, self.truncated or other.truncated
        )

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_compatible(other)
        return OperatorMatrix(
            self.entries - other.entries, self.row_basis, self.col_basis, self.truncated or other.truncated
        )

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        return OperatorMatrix(complex(scalar) * self.entries, self.row_basis, self.col_basis, self.truncated)

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return self * -1.0

    def spectral_norm(self) -> float:
        return spectral_norm(self.entries)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def is_selfadjoint(self, tol: float = 1e-10) -> bool:
        rows, cols = self.shape
        return rows == cols and spectral_norm(self.entries - self.entries.conj().T) < tol


def spectral_norm(entries: np.ndarray) -> float:
    if entries.size == 0:
        return 0.0
    return float(linalg.svdvals(entries)[0])


@dataclass(frozen=True)
class Residual:
    """Spectral and Frobenius norm of an identity residual."""

    spectral: float
    frobenius: float
    truncated: bool = False

    @classmethod
    def of(cls, matrix: Union[OperatorMatrix, np.ndarray], *, truncated: bool = False) -> "Residual":
        entries = matrix.entries if isinstance(matrix, OperatorMatrix) else np.asarray(matrix)
        return cls(spectral=spectral_norm(entries), frobenius=float(np.linalg.norm(entries)), truncated=truncated)


def toeplitz_matrix(a: Symbol, N: int) -> OperatorMatrix:
    """[a(j - k)] for 0 <= j, k < N."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    column = a.coefficients(np.arange(N))
    row = a.coefficients(-np.arange(N))
    truncated = N - 1 > a.window and a.truncated
    if truncated:
        logger.warning("Toeplitz matrix of size %d exceeds the window %d of %s", N, a.window, a.label)
    return OperatorMatrix(linalg.toeplitz(column, row), truncated=truncated)


def hankel_matrix(a: Symbol, N: int) -> OperatorMatrix:
    """[a(j + k + 1)] for 0 <= j, k < N."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    first_column = a.coefficients(np.arange(1, N + 1))
    last_row = a.coefficients(np.arange(N, 2 * N))
    truncated = 2 * N - 1 > a.window and a.truncated
    if truncated:
        logger.warning("Hankel matrix of size %d exceeds the window %d of %s", N, a.window, a.label)
    return OperatorMatrix(linalg.hankel(first_column, last_row), truncated=truncated)


def laurent_matrix(a: Symbol, N: int) -> OperatorMatrix:
    """Multiplication by ``a`` on the L^2 window -N..N, rows and columns ordered by index."""
    indices = np.arange(-N, N + 1)
    column = a.coefficients(indices + N)
    row = a.coefficients(-(indices + N))
    truncated = 2 * N > a.window and a.truncated
    return OperatorMatrix(linalg.toeplitz(column, row), row_basis="laurent", col_basis="laurent", truncated=truncated)


def coordinate_projection(N: int, n: int) -> np.ndarray:
    """The diagonal projection P_n onto the first ``n`` of ``N`` Fourier modes."""
    return np.diag((np.arange(N) < n).astype(complex))


def classical_widom_residual(a: Symbol, b: Symbol, n: int, N: int) -> Residual:
    """Residual of Widom's identity for Toeplitz matrices on the Fourier window of size N.

    Compares P_n T(ab) P_n with P_n T(a) P_n T(b) P_n + P_n H(a) H(flip b) P_n
    + R_n H(flip a) H(b) R_n, where R_n = H(t^n).
    """
    if not 1 <= n <= N:
        raise DomainError(f"need 1 <= n <= N, got n = {n}, N = {N}")
    P = coordinate_projection(N, n)
    R = hankel_matrix(Symbol.monomial(n), N).entries
    T_ab = toeplitz_matrix(a * b, N)
    T_a, T_b = toeplitz_matrix(a, N), toeplitz_matrix(b, N)
    H_a, H_b = hankel_matrix(a, N), hankel_matrix(b, N)
    H_a_flip, H_b_flip = hankel_matrix(flip(a), N), hankel_matrix(flip(b), N)

    lhs = P @ T_ab.entries @ P
    rhs = (
        P @ T_a.entries @ P @ T_b.entries @ P
        + P @ H_a.entries @ H_b_flip.entries @ P
        + R @ H_a_flip.entries @ H_b.entries @ R
    )
    parts = (T_ab, T_a, T_b, H_a, H_b, H_a_flip, H_b_flip)
    truncated = N < n + a.degree + b.degree or any(p.truncated for p in parts)
    if truncated:
        logger.warning("classical Widom residual at n=%d, N=%d is dominated by truncation", n, N)
    return Residual.of(lhs - rhs, truncated=truncated)
