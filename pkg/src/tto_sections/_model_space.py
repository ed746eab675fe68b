"""Model spaces K^2_{u_n} of partial Blaschke products.

Two representations are kept side by side:

* ``TMFrame`` works in Takenaka-Malmquist coordinates only.  The compressed
  shift, the coordinates of P_{u_n}1 and of the Hankel vectors of u_n all have
  closed forms in terms of the zeros, so sections are assembled without any
  Fourier window and stay exact for zeros arbitrarily close to the circle.
* ``TMBasis`` embeds the same orthonormal functions into the Fourier window
  0..N_F-1 of H^2.  It is what the windowed projection matrices and the
  quadrature oracle are built from and requires the zeros to be resolvable
  by the window.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import linalg, signal

from tto_sections._blaschke import BlaschkeProduct, Zero, factor_filter, factor_values
from tto_sections._errors import DomainError, ResolutionError
from tto_sections._hardy import (
    FOURIER,
    TAIL_TOLERANCE,
    CircleGrid,
    OperatorMatrix,
    Symbol,
    flip,
    hankel_matrix,
    laurent_matrix,
    spectral_norm,
    toeplitz_matrix,
)

logger = logging.getLogger(__name__)

GRAM_TOLERANCE = 1e-10
REFINEMENT_CAP = 2**14
UNIMODULAR_TOLERANCE = 1e-10

PROBE_MODES = ("hankel", "adjoint", "reflected-projection", "projection")


def high_order(u: BlaschkeProduct, n_list: Sequence[int]) -> int:
    """Order of the partial product that stands in for ``u`` itself."""
    order = max(4 * max(n_list), 64)
    return order if u.degree is None else min(order, u.degree)


@dataclass(frozen=True, eq=False)
class TMFrame:
    """Takenaka-Malmquist coordinates of K^2_{u_n} for the zeros ``zeros``.

    e_k(z) = s_k / (1 - conj(l_k) z) * prod_{j<k} b_{l_j}(z),  s_k = sqrt(1 - |l_k|^2).
    """

    zeros: tuple[Zero, ...]
    basis_id: str = "tm"

    def __post_init__(self) -> None:
        if not self.zeros:
            raise DomainError("a model-space frame needs at least one zero")

    @classmethod
    def of(cls, u: BlaschkeProduct, n: int) -> "TMFrame":
        return cls(zeros=u.materialize(n), basis_id=f"tm:{u.name}")

    @property
    def n(self) -> int:
        return len(self.zeros)

    @cached_property
    def values(self) -> np.ndarray:
        return np.array([z.value for z in self.zeros], dtype=complex)

    @cached_property
    def defects(self) -> np.ndarray:
        return np.array([z.defect for z in self.zeros], dtype=float)

    @cached_property
    def moduli(self) -> np.ndarray:
        return 1.0 - self.defects

    @cached_property
    def scales(self) -> np.ndarray:
        d = self.defects
        return np.sqrt(d * (2.0 - d))

    @cached_property
    def phases(self) -> np.ndarray:
        """-|l|/l, and 1 at the origin."""
        return np.array([1.0 if z.is_origin else -np.exp(-1j * z.angle) for z in self.zeros], dtype=complex)

    # -- compressed shift ----------------------------------------------------

    def apply_shift(self, x: np.ndarray) -> np.ndarray:
        """S x for the compressed shift S = P_{u_n} M_z on K^2_{u_n}.

        S is lower triangular; row j only reads x[0..j], so results for a
        leading block do not depend on n.
        """
        x = np.asarray(x, dtype=complex)
        out = np.empty_like(x)
        carry = np.zeros(x.shape[1:], dtype=complex)
        lam, s, mod, phi = self.values, self.scales, self.moduli, np.conj(self.phases)
        for j in range(self.n):
            out[j] = lam[j] * x[j] + s[j] * carry
            carry = mod[j] * carry + s[j] * phi[j] * x[j]
        return out

    def apply_shift_adjoint(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.empty_like(x)
        carry = np.zeros(x.shape[1:], dtype=complex)
        lam, s, mod, psi = self.values, self.scales, self.moduli, self.phases
        for k in reversed(range(self.n)):
            out[k] = np.conj(lam[k]) * x[k] + s[k] * psi[k] * carry
            carry = s[k] * x[k] + mod[k] * carry
        return out

    def shift_matrix(self) -> np.ndarray:
        return self.apply_shift(np.eye(self.n, dtype=complex))

    def functional_calculus(self, a: Symbol) -> np.ndarray:
        """P_{u_n} T(a) P_{u_n} in TM coordinates.

        Sum of a(p) S^p over p >= 0 and a(-p) (S*)^p over p > 0, for the
        coefficient window of ``a``; since ||S|| <= 1 the error is at most the
        tail bound of ``a``.
        """
        identity = np.eye(self.n, dtype=complex)
        result = a.coefficient(0) * identity
        power = identity
        for p in range(1, a.analytic_degree + 1):
            power = self.apply_shift(power)
            result = result + a.coefficient(p) * power
        power = identity
        for p in range(1, a.coanalytic_degree + 1):
            power = self.apply_shift_adjoint(power)
            result = result + a.coefficient(-p) * power
        return result

    # -- vectors -------------------------------------------------------------

    def origin_vector(self) -> np.ndarray:
        """Coordinates of P_{u_n} 1, i.e. conj(e_k(0))."""
        prefix = np.concatenate(([1.0], np.cumprod(self.moduli[:-1])))
        return (self.scales * prefix).astype(complex)

    def hankel_seed(self) -> np.ndarray:
        """Coordinates of the backward shift of u_n, H(u_n) 1."""
        suffix = np.concatenate((np.cumprod(self.moduli[:0:-1])[::-1], [1.0]))
        return self.scales * self.phases * suffix

    def hankel_columns(self, d: int) -> np.ndarray:
        """n x d matrix whose i-th column holds the coordinates of H(u_n) t^i."""
        columns = np.empty((self.n, d), dtype=complex)
        column = self.hankel_seed()
        for i in range(d):
            columns[:, i] = column
            column = self.apply_shift_adjoint(column)
        return columns

    def taylor_embedding(self, length: int) -> np.ndarray:
        """length x n matrix of the Taylor coefficients of e_1..e_n."""
        series = np.zeros(length, dtype=complex)
        series[0] = 1.0
        columns = np.empty((length, self.n), dtype=complex)
        for k, zero in enumerate(self.zeros):
            kernel_pole = np.array([1.0, -np.conj(self.values[k])], dtype=complex)
            columns[:, k] = self.scales[k] * signal.lfilter([1.0], kernel_pole, series)
            numerator, denominator = factor_filter(zero)
            series = signal.lfilter(numerator, denominator, series)
        return columns

    def taylor_rows(self, d: int) -> np.ndarray:
        """n x d matrix whose q-th column holds the coordinates of P_{u_n} t^q."""
        return self.taylor_embedding(d).conj().T

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Values of e_1..e_n at unimodular ``points``, shape (len(points), n)."""
        t = np.asarray(points, dtype=complex)
        values = np.empty((t.size, self.n), dtype=complex)
        prefix = np.ones(t.size, dtype=complex)
        for k, zero in enumerate(self.zeros):
            if zero.is_origin:
                kernel = np.ones(t.size, dtype=complex)
            else:
                w = np.exp(-1j * zero.angle) * t
                kernel = 1.0 / ((1.0 - w) + zero.defect * w)
            values[:, k] = self.scales[k] * kernel * prefix
            prefix = prefix * factor_values(zero, t)
        return values


@dataclass(frozen=True, eq=False)
class TMBasis:
    """Takenaka-Malmquist basis of K^2_{u_n} embedded in the Fourier window 0..N_F-1."""

    frame: TMFrame
    E: OperatorMatrix
    grid: CircleGrid
    samples: np.ndarray
    gram_residual: float
    quadrature_residual: float

    @property
    def zeros(self) -> tuple[Zero, ...]:
        return self.frame.zeros

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def N_F(self) -> int:
        return self.E.shape[0]

    @property
    def truncated(self) -> bool:
        return self.gram_residual >= GRAM_TOLERANCE


def _gram_residual(columns: np.ndarray, weight: float = 1.0) -> float:
    gram = weight * (columns.conj().T @ columns)
    return spectral_norm(gram - np.eye(columns.shape[1]))


def tm_basis(
    u: BlaschkeProduct,
    n: int,
    N_F: int = 256,
    grid: Optional[CircleGrid] = None,
    *,
    refine: bool = True,
    cap: int = REFINEMENT_CAP,
) -> TMBasis:
    """Orthonormal basis of K^2_{u_n} on a Fourier window and a circle grid.

    With ``refine`` the window and the grid are doubled until both Gram
    residuals are below 1e-10; reaching ``cap`` raises ``ResolutionError``.
    Without it the basis is returned as is and flagged as truncated.
    """
    frame = TMFrame.of(u, n)
    max_modulus = float(frame.moduli.max())
    while True:
        E = frame.taylor_embedding(N_F)
        gram = _gram_residual(E)
        if gram < GRAM_TOLERANCE or not refine:
            break
        if 2 * N_F > cap:
            raise ResolutionError(f"Gram residual {gram:.3e} at N_F = {N_F}", max_modulus=max_modulus, cap=cap)
        logger.debug("refining TM window %d -> %d (Gram residual %.3e)", N_F, 2 * N_F, gram)
        N_F *= 2

    if grid is None or 2 * N_F >= grid.M:
        grid = CircleGrid.for_window(N_F)
    while True:
        samples = frame.evaluate(grid.points)
        quadrature = _gram_residual(samples, 1.0 / grid.M)
        if quadrature < GRAM_TOLERANCE or not refine:
            break
        if grid.M > 8 * cap:
            raise ResolutionError(
                f"quadrature Gram residual {quadrature:.3e} at M = {grid.M}", max_modulus=max_modulus, cap=cap
            )
        grid = grid.refined()

    if gram >= GRAM_TOLERANCE:
        logger.warning("TM basis for %s, n=%d is truncated at N_F=%d (Gram residual %.3e)", u.name, n, N_F, gram)
    E_matrix = OperatorMatrix(E, row_basis=FOURIER, col_basis=frame.basis_id, truncated=gram >= GRAM_TOLERANCE)
    return TMBasis(
        frame=frame,
        E=E_matrix,
        grid=grid,
        samples=samples,
        gram_residual=gram,
        quadrature_residual=quadrature,
    )


def projection_matrix(basis: TMBasis) -> OperatorMatrix:
    """P_{u_n} = E E* on the Fourier window."""
    return basis.E @ basis.E.adjoint()


def inner_symbol(u: BlaschkeProduct, n: int, N_F: int) -> Symbol:
    """u_n as a Symbol with exact Taylor coefficients on the window."""
    taylor = u.taylor_coefficients(n, 4 * N_F + 1)
    coeffs = np.concatenate((np.zeros(N_F, dtype=complex), taylor[: N_F + 1]))
    grid = CircleGrid.for_window(N_F)
    tail = float(np.abs(taylor[N_F + 1 :]).sum())
    return Symbol(grid=grid, samples=u.evaluate(n, grid.points), coeffs=coeffs, tail_bound=tail, label=f"u_{n}")


def projection_from_inner(u: BlaschkeProduct, n: int, N_F: int) -> OperatorMatrix:
    """P - M_{u_n} P M_{conj(u_n)} compressed to the window 0..N_F-1.

    Built from Laurent matrices on -N_F..N_F, independently of the TM basis.
    """
    L = laurent_matrix(inner_symbol(u, n, N_F), N_F).entries
    analytic = np.diag((np.arange(-N_F, N_F + 1) >= 0).astype(complex))
    block = (analytic - L @ analytic @ L.conj().T)[N_F:, N_F:]
    return OperatorMatrix(block[:N_F, :N_F])


@dataclass(frozen=True, eq=False)
class TTOMatrix:
    """Finite section P_{u_n} T_u(a) P_{u_n} in TM coordinates."""

    entries: np.ndarray
    symbol_tag: str
    basis_id: str
    method: str = "shift"
    truncated: bool = False

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def matrix(self) -> OperatorMatrix:
        return OperatorMatrix(self.entries, self.basis_id, self.basis_id, self.truncated)

    def leading(self, m: int) -> "TTOMatrix":
        return TTOMatrix(self.entries[:m, :m], self.symbol_tag, self.basis_id, self.method, self.truncated)

    def is_selfadjoint(self, tol: float = 1e-12) -> bool:
        return spectral_norm(self.entries - self.entries.conj().T) < tol


TTO_METHODS = ("shift", "quadrature", "embedding")


def tto_matrix(
    u: BlaschkeProduct,
    n: int,
    a: Symbol,
    grid: Optional[CircleGrid] = None,
    *,
    method: str = "shift",
    N_F: int = 256,
) -> TTOMatrix:
    """Truncated Toeplitz matrix of ``a`` on K^2_{u_n}.

    ``shift`` uses the functional calculus of the compressed shift and is exact
    for every representable zero; sections for m < n are bitwise leading
    blocks.  ``quadrature`` integrates a e_k conj(e_j) over the grid and
    ``embedding`` forms E* T(a) E; both need a resolvable basis.
    """
    if method == "shift":
        frame = TMFrame.of(u, n)
        return TTOMatrix(frame.functional_calculus(a), a.label, frame.basis_id, method, a.truncated)
    if method not in TTO_METHODS:
        raise DomainError(f"unknown assembly method {method!r}, expected one of {TTO_METHODS}")

    basis = tm_basis(u, n, N_F, grid)
    if method == "quadrature":
        values = a.samples if a.grid == basis.grid else a.evaluate(basis.grid.points)
        entries = basis.samples.conj().T @ (values[:, None] * basis.samples) / basis.grid.M
        truncated = basis.truncated or a.truncated
    else:
        T = toeplitz_matrix(a, basis.N_F)
        entries = basis.E.entries.conj().T @ T.entries @ basis.E.entries
        truncated = basis.truncated or T.truncated
    return TTOMatrix(entries, a.label, basis.frame.basis_id, method, truncated)


def r_matrix(u: BlaschkeProduct, n: int, N_F: int) -> OperatorMatrix:
    """R_{u_n} = H(u_n) on the window: entries u_n^(j + k + 1)."""
    taylor = u.taylor_coefficients(n, 4 * N_F)
    tail = float(np.abs(taylor[2 * N_F :]).sum())
    truncated = tail > TAIL_TOLERANCE
    if truncated:
        logger.warning("coefficients of u_%d have not decayed within 2 N_F = %d (tail %.3e)", n, 2 * N_F, tail)
    return OperatorMatrix(linalg.hankel(taylor[1 : N_F + 1], taylor[N_F : 2 * N_F]), truncated=truncated)


class IsometryResiduals(NamedTuple):
    res1: float
    res2: float


def hankel_isometry_check(v: Symbol, N_F: int) -> IsometryResiduals:
    """Residuals of H(v)H(v)* = P - vPconj(v) and H(v)*H(v) = P - conj(flip v) P flip v.

    ``v`` must be inner and is given through its Fourier window, which has to
    reach 2 N_F - 1 for the Hankel block to be complete.
    """
    deviation = float(np.max(np.abs(np.abs(v.samples) - 1.0)))
    if deviation > UNIMODULAR_TOLERANCE:
        raise DomainError(f"symbol {v.label!r} is not unimodular (max deviation {deviation:.3e})")
    identity = np.eye(N_F)
    H = hankel_matrix(v, N_F).entries
    T = toeplitz_matrix(v, N_F).entries
    T_w = toeplitz_matrix(flip(v.conj()), N_F).entries
    res1 = spectral_norm(H @ H.conj().T - (identity - T @ T.conj().T))
    res2 = spectral_norm(H.conj().T @ H - (identity - T_w @ T_w.conj().T))
    return IsometryResiduals(res1, res2)


@dataclass(frozen=True)
class HankelRelations:
    """Residuals of the identities satisfied by R_{u_n} on the window."""

    range_residual: float
    initial_residual: float
    left_residual: float
    right_residual: float
    N_F: int
    M: int
    truncated: bool


def hankel_relations(u: BlaschkeProduct, n: int, N_F: int) -> HankelRelations:
    """R R* = P_{u_n}, R* R = P of the reflected product, P R = R and R* P = R*."""
    basis = tm_basis(u, n, N_F)
    reflected = tm_basis(u.reflect(), n, basis.N_F)
    window = max(basis.N_F, reflected.N_F)
    if window != basis.N_F:
        basis = tm_basis(u, n, window)
    P = projection_matrix(basis).entries
    P_reflected = projection_matrix(reflected).entries
    R = r_matrix(u, n, window)
    Rm = R.entries
    return HankelRelations(
        range_residual=spectral_norm(Rm @ Rm.conj().T - P),
        initial_residual=spectral_norm(Rm.conj().T @ Rm - P_reflected),
        left_residual=spectral_norm(P @ Rm - Rm),
        right_residual=spectral_norm(Rm.conj().T @ P - Rm.conj().T),
        N_F=window,
        M=basis.grid.M,
        truncated=R.truncated or basis.truncated or reflected.truncated,
    )


def _support(x: np.ndarray) -> int:
    nonzero = np.nonzero(x)[0]
    return int(nonzero[-1]) + 1 if nonzero.size else 1


def r_convergence_probe(
    u: BlaschkeProduct,
    x: Sequence[complex],
    n_list: Sequence[int],
    N_F: int,
    *,
    mode: str = "hankel",
    order: Optional[int] = None,
) -> list[float]:
    """Distances ||(A_n - A)x|| for the filtration limits of the partial products.

    Modes: ``hankel`` compares R_{u_n}x with H(u)x, ``adjoint`` compares the
    adjoints, ``reflected-projection`` compares the projections of the
    reflected products and ``projection`` compares P_{u_n}x with P_u x.  The
    limit uses the partial product of order ``order`` (default ``high_order``).
    """
    if mode not in PROBE_MODES:
        raise DomainError(f"unknown probe mode {mode!r}, expected one of {PROBE_MODES}")
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1 or len(x) > N_F:
        raise DomainError(f"probe vector must be 1-D with at most N_F = {N_F} entries")
    if mode in ("adjoint", "reflected-projection"):
        u = u.reflect()
    order = high_order(u, n_list) if order is None else order
    d = _support(x)
    x = np.pad(x, (0, max(0, d - len(x))))[:d]
    limit = TMFrame.of(u, order)

    trace = []
    if mode in ("hankel", "adjoint"):
        target = limit.hankel_columns(d) @ x
        for n in n_list:
            m = min(n, order)
            difference = target.copy()
            difference[:m] -= TMFrame.of(u, m).hankel_columns(d) @ x
            trace.append(float(np.linalg.norm(difference)))
    else:
        coordinates = limit.taylor_rows(d) @ x
        for n in n_list:
            trace.append(float(np.linalg.norm(coordinates[min(n, order) :])))
    logger.debug("%s probe for %s: %s", mode, u.name, trace)
    return trace


def analytic_annihilation(basis: TMBasis) -> float:
    """||P_{u_n} M_{u_n} P|| on the window, i.e. ||E* T(u_n)||."""
    u_n = BlaschkeProduct(zeros=basis.zeros)
    taylor = u_n.taylor_coefficients(basis.n, basis.N_F)
    T = linalg.toeplitz(taylor, np.zeros(basis.N_F))
    return spectral_norm(basis.E.entries.conj().T @ T)

