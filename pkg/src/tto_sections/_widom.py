"""Widom's identity for truncated Toeplitz operators and its compact corrections.

On K^2_{u_n}:

    T_n(ab) = T_n(a) T_n(b) + P_{u_n} H(a) H(flip b) P_{u_n} + R_{u_n} H(flip a) H(b) R_{u_n}*

where T_n(c) = P_{u_n} T(c) P_{u_n} and R_{u_n} = H(u_n).  The default
assembly works in Takenaka-Malmquist coordinates: the Hankel products act on
the first d Fourier modes only (d = degree of the windowed symbols) and are
carried into the model space by the closed-form matrices of ``TMFrame``.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy import linalg

from tto_sections._blaschke import BlaschkeProduct
from tto_sections._errors import DomainError
from tto_sections._hardy import (
    OperatorMatrix,
    Symbol,
    flip,
    hankel_matrix,
    spectral_norm,
    toeplitz_matrix,
)
from tto_sections._model_space import (
    GRAM_TOLERANCE,
    TMFrame,
    high_order,
    projection_matrix,
    r_matrix,
    tm_basis,
)

logger = logging.getLogger(__name__)

WIDOM_METHODS = ("coordinates", "window")


@dataclass(frozen=True)
class WidomReport:
    residual_spectral: float
    residual_frobenius: float
    n: int
    N_F: int
    M: int
    truncation_flag: bool
    method: str = "coordinates"

    def __post_init__(self) -> None:
        if self.residual_spectral < 0 or self.residual_frobenius < 0:
            raise DomainError("residual norms are nonnegative")


def _hankel_block(a: Symbol, b: Symbol, d: int) -> np.ndarray:
    """H(a) H(b) on the first d Fourier modes, exact when both symbols have degree <= d."""
    return hankel_matrix(a, d).entries @ hankel_matrix(b, d).entries


def _correction_terms(frame: TMFrame, a: Symbol, b: Symbol, hankel_frame: Optional[TMFrame] = None) -> np.ndarray:
    """V H(a)H(flip b) V* + C H(flip a)H(b) C* in the coordinates of ``frame``.

    ``hankel_frame`` supplies the Hankel vectors of the product standing in
    for u; its coordinates are cut to the first ``frame.n`` entries.
    """
    d = max(a.degree, b.degree, 1)
    V = frame.taylor_rows(d)
    C = (hankel_frame or frame).hankel_columns(d)[: frame.n]
    first = V @ _hankel_block(a, flip(b), d) @ V.conj().T
    second = C @ _hankel_block(flip(a), b, d) @ C.conj().T
    return first + second


def tto_widom_residual(
    u: BlaschkeProduct,
    a: Symbol,
    b: Symbol,
    n: int,
    N_F: int,
    *,
    method: str = "coordinates",
) -> WidomReport:
    """Residual of Widom's identity on K^2_{u_n} with symbols cut to the window N_F.

    ``coordinates`` is exact up to rounding for every representable zero.
    ``window`` assembles P_{u_n}, R_{u_n} and the Toeplitz and Hankel matrices
    on the Fourier window 0..N_F-1 and only resolves zeros whose Taylor
    series decay within the window; it then decreases as N_F grows.  A zero
    with defect near 1/N_F leaves the window basis far from orthonormal and
    the decrease per doubling of N_F is slow.
    """
    if method not in WIDOM_METHODS:
        raise DomainError(f"unknown method {method!r}, expected one of {WIDOM_METHODS}")
    a_w, b_w = a.with_window(min(a.window, N_F)), b.with_window(min(b.window, N_F))
    ab = (a * b).with_window(min(a.window + b.window, 2 * N_F))
    truncated = a_w.truncated or b_w.truncated

    if method == "coordinates":
        frame = TMFrame.of(u, n)
        residual = (
            frame.functional_calculus(ab)
            - frame.functional_calculus(a_w) @ frame.functional_calculus(b_w)
            - _correction_terms(frame, a_w, b_w)
        )
        M = ab.grid.M
    else:
        basis = tm_basis(u, n, N_F, refine=False)
        P = projection_matrix(basis).entries
        R = r_matrix(u, n, N_F)
        T_ab = toeplitz_matrix(ab, N_F).entries
        T_a, T_b = toeplitz_matrix(a_w, N_F).entries, toeplitz_matrix(b_w, N_F).entries
        lhs = P @ T_ab @ P
        rhs = (
            P @ T_a @ P @ T_b @ P
            + P @ hankel_matrix(a_w, N_F).entries @ hankel_matrix(flip(b_w), N_F).entries @ P
            + R.entries @ hankel_matrix(flip(a_w), N_F).entries @ hankel_matrix(b_w, N_F).entries @ R.entries.conj().T
        )
        residual = lhs - rhs
        truncated = truncated or basis.gram_residual >= GRAM_TOLERANCE or R.truncated
        M = basis.grid.M

    if truncated:
        logger.warning("Widom residual for %s at n=%d, N_F=%d is dominated by truncation", u.name, n, N_F)
    return WidomReport(
        residual_spectral=spectral_norm(residual),
        residual_frobenius=float(np.linalg.norm(residual)),
        n=n,
        N_F=N_F,
        M=M,
        truncation_flag=truncated,
        method=method,
    )


@dataclass(frozen=True, eq=False)
class CompactCorrection:
    """K = H(a)H(flip b) + H(u)H(flip a)H(b)H(u)* on the window, with u of order ``order``."""

    matrix: OperatorMatrix
    order: int


def compact_correction(
    u: BlaschkeProduct,
    a: Symbol,
    b: Symbol,
    N_F: int,
    *,
    order: Optional[int] = None,
) -> CompactCorrection:
    order = high_order(u, [1]) if order is None else order
    H_u = r_matrix(u, order, N_F)
    first = hankel_matrix(a, N_F).entries @ hankel_matrix(flip(b), N_F).entries
    middle = hankel_matrix(flip(a), N_F).entries @ hankel_matrix(b, N_F).entries
    K = first + H_u.entries @ middle @ H_u.entries.conj().T
    logger.debug("compact correction for %s uses the partial product of order %d", u.name, order)
    return CompactCorrection(matrix=OperatorMatrix(K, truncated=H_u.truncated), order=order)


def section_defect(
    u: BlaschkeProduct,
    a: Symbol,
    b: Symbol,
    n_list: Sequence[int],
    N_F: int,
    *,
    order: Optional[int] = None,
) -> list[float]:
    """||T_n(a)T_n(b) - T_n(ab) + P_{u_n} K P_{u_n}|| for each n, in TM coordinates.

    K is the compact correction with u replaced by its partial product of
    order ``order``; the norms tend to 0 as n grows.
    """
    order = high_order(u, n_list) if order is None else order
    limit = TMFrame.of(u, order)
    a, b = a.with_window(min(a.window, N_F)), b.with_window(min(b.window, N_F))
    ab = a * b
    norms = []
    for n in n_list:
        frame = TMFrame.of(u, min(n, order))
        G = (
            frame.functional_calculus(a) @ frame.functional_calculus(b)
            - frame.functional_calculus(ab)
            + _correction_terms(frame, a, b, hankel_frame=limit)
        )
        norms.append(spectral_norm(G))
    return norms


def corollary_convergence_residual(
    u: BlaschkeProduct,
    L: Union[OperatorMatrix, np.ndarray],
    n_list: Sequence[int],
    N_F: int,
    *,
    order: Optional[int] = None,
) -> list[float]:
    """||R_{u_n} L R_{u_n}* - P_{u_n} H(u) L H(u)* P_{u_n}|| for each n.

    ``L`` is a finite-rank operator given by its block on the first d Fourier
    modes, d <= N_F.  Both terms are evaluated in TM coordinates of the
    partial product of order ``order``.
    """
    L = L.entries if isinstance(L, OperatorMatrix) else np.asarray(L, dtype=complex)
    d = L.shape[0]
    if L.shape != (d, d) or d > N_F:
        raise DomainError(f"L must be square with size at most N_F = {N_F}, got shape {L.shape}")
    order = high_order(u, n_list) if order is None else order
    limit = TMFrame.of(u, order).hankel_columns(d)
    residuals = []
    for n in n_list:
        m = min(n, order)
        C = TMFrame.of(u, m).hankel_columns(d)
        C_limit = limit[:m]
        residuals.append(spectral_norm(C @ L @ C.conj().T - C_limit @ L @ C_limit.conj().T))
    return residuals


def semicommutator_singular_values(u: BlaschkeProduct, a: Symbol, b: Symbol, n: int) -> np.ndarray:
    """Singular values (descending) of T_n(a)T_n(b) - T_n(ab)."""
    frame = TMFrame.of(u, n)
    difference = frame.functional_calculus(a) @ frame.functional_calculus(b) - frame.functional_calculus(a * b)
    return linalg.svdvals(difference)
