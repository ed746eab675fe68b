"""Finite sections of A = T_u(a) + K on the filtration of model spaces K^2_{u_n}.

A sequence is described by a ``SequenceSpec``: the product u, the symbol a,
a finite-rank K given by rank-one terms in TM coordinates, and an optional
vanishing perturbation G_n.  Its sections are

    A_n = P_{u_n} (T_u(a) + K) P_{u_n} + G_n

as n x n matrices in TM coordinates.  Stability, spectral convergence and
kernel-dimension evidence are all read off traces of these matrices.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, TypeVar

import numpy as np
from scipy import linalg

from tto_sections._blaschke import BlaschkeProduct
from tto_sections._errors import DomainError
from tto_sections._hardy import OperatorMatrix, Symbol, spectral_norm
from tto_sections._model_space import TMFrame
from tto_sections._spectra import (
    ComplexGrid,
    SpectralMode,
    SpectralSet,
    hausdorff,
    is_nonincreasing,
    pseudospectrum_grid,
    spectra,
)

logger = logging.getLogger(__name__)

TAIL_SLACK = 0.1
VANISH_FACTOR = 1e-6
FLOOR_FACTOR = 1e-10

T = TypeVar("T")
R = TypeVar("R")


def _map(fn: Callable[[T], R], items: Sequence[T], workers: Optional[int]) -> list[R]:
    """Apply ``fn`` in order, on a thread pool when ``workers`` > 1."""
    if not workers or workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _check_n_list(n_list: Sequence[int], minimum: int = 1) -> list[int]:
    n_list = [int(n) for n in n_list]
    if len(n_list) < minimum:
        raise DomainError(f"n_list needs at least {minimum} entries, got {len(n_list)}")
    if any(n < 1 for n in n_list) or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError(f"n_list must be strictly increasing positive integers, got {n_list}")
    return n_list


@dataclass(frozen=True)
class RankOneTerm:
    """The operator x -> coefficient * <x, right> left, vectors in TM coordinates."""

    coefficient: complex
    left: tuple[complex, ...]
    right: tuple[complex, ...]

    def __post_init__(self) -> None:
        if not self.left or not self.right:
            raise DomainError("rank-one vectors must be nonempty")
        object.__setattr__(self, "left", tuple(complex(v) for v in self.left))
        object.__setattr__(self, "right", tuple(complex(v) for v in self.right))

    @property
    def support(self) -> int:
        return max(len(self.left), len(self.right))

    def block(self, n: int) -> np.ndarray:
        """Compression to the first ``n`` coordinates."""
        left = np.zeros(n, dtype=complex)
        right = np.zeros(n, dtype=complex)
        left[: min(n, len(self.left))] = self.left[:n]
        right[: min(n, len(self.right))] = self.right[:n]
        return self.coefficient * np.outer(left, right.conj())


class DecayKind(str, Enum):
    GEOMETRIC = "geometric"
    HARMONIC = "harmonic"


@dataclass(frozen=True)
class PerturbationRule:
    """G_n of norm scale * rate**n (geometric) or scale / n (harmonic).

    The direction is a Gaussian matrix drawn from a generator seeded with
    (seed, n), so every section is reproducible on its own.
    """

    kind: DecayKind = DecayKind.GEOMETRIC
    scale: float = 1.0
    rate: float = 0.5
    seed: int = 0
    hermitian: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", DecayKind(self.kind))
        if self.scale < 0:
            raise DomainError(f"perturbation scale must be >= 0, got {self.scale!r}")
        if self.kind is DecayKind.GEOMETRIC and not 0.0 < self.rate < 1.0:
            raise DomainError(f"geometric perturbations need 0 < rate < 1, got {self.rate!r}")

    def norm(self, n: int) -> float:
        if self.kind is DecayKind.GEOMETRIC:
            return self.scale * self.rate**n
        return self.scale / n

    def sample(self, n: int) -> np.ndarray:
        rng = np.random.default_rng([self.seed, n])
        Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if self.hermitian:
            Z = (Z + Z.conj().T) / 2
        return self.norm(n) / spectral_norm(Z) * Z


@dataclass(frozen=True, eq=False)
class SequenceSpec:
    u: BlaschkeProduct
    symbol: Symbol
    compact: tuple[RankOneTerm, ...] = ()
    perturbation: Optional[PerturbationRule] = None
    label: str = ""

    def section_size(self, n: int) -> int:
        """Sections of a finite product saturate at its degree."""
        return self.u.available(n)

    def compact_block(self, n: int) -> np.ndarray:
        block = np.zeros((n, n), dtype=complex)
        for term in self.compact:
            block += term.block(n)
        return block

    @property
    def is_selfadjoint(self) -> bool:
        if not self.symbol.is_real():
            return False
        if self.perturbation is not None and not self.perturbation.hermitian:
            return False
        if self.compact:
            support = max(term.support for term in self.compact)
            K = self.compact_block(support)
            if spectral_norm(K - K.conj().T) > 1e-12:
                return False
        return True

    @property
    def certificate(self) -> Optional[float]:
        """min a when the sections are compressions of an operator bounded below by it."""
        if self.compact or self.perturbation is not None or not self.symbol.is_real():
            return None
        lowest = self.symbol.min_real_value()
        return lowest if lowest > 0 else None


class SequenceBuilder:
    """Fluent builder for sequence specifications.

    Usage::

        spec = (SequenceBuilder()
            .blaschke(u)
            .symbol(a)
            .rank_one(1.0, [1.0], [1.0])
            .perturbation("geometric", scale=0.1, rate=0.5, seed=7)
            .build())
    """

    def __init__(self) -> None:
        self._u: Optional[BlaschkeProduct] = None
        self._symbol: Optional[Symbol] = None
        self._terms: list[RankOneTerm] = []
        self._perturbation: Optional[PerturbationRule] = None
        self._label = ""

    def blaschke(self, u: BlaschkeProduct) -> "SequenceBuilder":
        self._u = u
        return self

    def symbol(self, a: Symbol) -> "SequenceBuilder":
        self._symbol = a
        return self

    def rank_one(self, coefficient: complex, left: Sequence[complex], right: Sequence[complex]) -> "SequenceBuilder":
        self._terms.append(RankOneTerm(coefficient=complex(coefficient), left=tuple(left), right=tuple(right)))
        return self

    def perturbation(
        self,
        kind: str = "geometric",
        *,
        scale: float = 1.0,
        rate: float = 0.5,
        seed: int = 0,
        hermitian: bool = False,
    ) -> "SequenceBuilder":
        self._perturbation = PerturbationRule(DecayKind(kind), scale, rate, seed, hermitian)
        return self

    def label(self, text: str) -> "SequenceBuilder":
        self._label = text
        return self

    def build(self) -> SequenceSpec:
        if self._u is None:
            raise ValueError("sequence needs a Blaschke product")
        if self._symbol is None:
            raise ValueError("sequence needs a symbol")
        return SequenceSpec(
            u=self._u,
            symbol=self._symbol,
            compact=tuple(self._terms),
            perturbation=self._perturbation,
            label=self._label,
        )


def build_section(spec: SequenceSpec, n: int) -> OperatorMatrix:
    """A_n in TM coordinates; the size is clipped to the degree of a finite product."""
    size = spec.section_size(n)
    frame = TMFrame.of(spec.u, size)
    entries = frame.functional_calculus(spec.symbol)
    if spec.compact:
        entries = entries + spec.compact_block(size)
    if spec.perturbation is not None:
        entries = entries + spec.perturbation.sample(size)
    return OperatorMatrix(entries, frame.basis_id, frame.basis_id, spec.symbol.truncated)


def _singular_values(spec: SequenceSpec, n: int) -> np.ndarray:
    """Ascending singular values of A_n."""
    return linalg.svdvals(build_section(spec, n).entries)[::-1]


# -- stability -----------------------------------------------------------------


class StabilityVerdict(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StabilityReport:
    verdict: StabilityVerdict
    sigma_min_trace: tuple[float, ...]
    n_list: tuple[int, ...]
    threshold: float
    certificate: Optional[float] = None
    certificate_agrees: Optional[bool] = None


def stability_probe(
    spec: SequenceSpec,
    n_list: Sequence[int],
    threshold: float = 1e-6,
    *,
    slack: float = TAIL_SLACK,
    workers: Optional[int] = None,
) -> StabilityReport:
    """Classify the sequence from the trace of sigma_min(A_n).

    Stable: the trace stays above ``threshold`` and its last value is at
    least half its maximum.  Unstable: the last value is below ``threshold``
    and the tail does not grow (values under 1e-10 ||A_n|| count as zero).
    """
    n_list = _check_n_list(n_list, minimum=3)
    values = _map(lambda n: _singular_values(spec, n), n_list, workers)
    trace = tuple(float(v[0]) for v in values)
    floors = [FLOOR_FACTOR * float(v[-1]) for v in values]
    clipped = [0.0 if s <= f else s for s, f in zip(trace, floors)]

    if min(trace) >= threshold and trace[-1] >= 0.5 * max(trace):
        verdict = StabilityVerdict.STABLE
    elif clipped[-1] < threshold and clipped[-1] <= (1.0 + slack) * clipped[-2]:
        verdict = StabilityVerdict.UNSTABLE
    else:
        verdict = StabilityVerdict.INCONCLUSIVE

    certificate = spec.certificate
    agrees = None
    if certificate is not None:
        agrees = verdict is StabilityVerdict.STABLE and all(s >= certificate - 1e-10 for s in trace)
        if not agrees:
            logger.warning("stability verdict %s disagrees with the certificate min a = %s", verdict.value, certificate)
    logger.debug("sigma_min trace for %s: %s", spec.label, trace)
    return StabilityReport(verdict, trace, tuple(n_list), threshold, certificate, agrees)


# -- spectral convergence ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SectionDiagnostics:
    n: int
    size: int
    singular_values: np.ndarray
    eigenvalues: Optional[np.ndarray] = None

    @property
    def norm(self) -> float:
        return float(self.singular_values[-1])


@dataclass(frozen=True, eq=False)
class SequenceReport:
    """Hausdorff distances of spectral sets of A_n to those of A_reference."""

    n_list: tuple[int, ...]
    reference_n: int
    eps_list: tuple[float, ...]
    sections: tuple[SectionDiagnostics, ...]
    tracks: dict[str, tuple[float, ...]]
    nonincreasing: dict[str, bool]
    grid: ComplexGrid
    coverage_warning: bool = False
    selfadjoint: bool = False
    truncated: bool = False

    @property
    def passed(self) -> bool:
        return all(self.nonincreasing.values())


def _diagnose(spec: SequenceSpec, n: int, selfadjoint: bool) -> tuple[SectionDiagnostics, OperatorMatrix]:
    A = build_section(spec, n)
    singular = spectra(A, SpectralMode.SINGULAR).points.real
    eigen = spectra(A, SpectralMode.SELFADJOINT_EIGEN).points.real if selfadjoint else None
    return SectionDiagnostics(n=n, size=A.shape[0], singular_values=singular, eigenvalues=eigen), A


def convergence_report(
    spec: SequenceSpec,
    n_list: Sequence[int],
    eps_list: Sequence[float] = (0.1,),
    *,
    reference_n: Optional[int] = None,
    resolution: int = 101,
    slack: float = TAIL_SLACK,
    workers: Optional[int] = None,
) -> SequenceReport:
    """Eigenvalue, singular-value and pseudospectral distance tables.

    The eigenvalue track is produced only for self-adjoint specs.  All
    pseudospectra are computed on one grid covering every section, and grid
    distances below one grid step count as converged.
    """
    n_list = _check_n_list(n_list)
    reference_n = 2 * n_list[-1] if reference_n is None else reference_n
    if reference_n < n_list[-1]:
        raise DomainError(f"reference order {reference_n} is below the largest n {n_list[-1]}")
    selfadjoint = spec.is_selfadjoint
    orders = n_list + [reference_n]
    results = _map(lambda n: _diagnose(spec, n, selfadjoint), orders, workers)
    sections = tuple(r[0] for r in results)
    matrices = [r[1] for r in results]
    reference = sections[-1]
    floor = FLOOR_FACTOR * max(reference.norm, 1.0)

    tracks: dict[str, tuple[float, ...]] = {}
    floors: dict[str, float] = {}
    if selfadjoint:
        tracks["eigenvalues"] = tuple(
            hausdorff(SpectralSet(s.eigenvalues), SpectralSet(reference.eigenvalues)) for s in sections[:-1]
        )
        floors["eigenvalues"] = floor
    tracks["singular-values"] = tuple(
        hausdorff(SpectralSet(s.singular_values), SpectralSet(reference.singular_values)) for s in sections[:-1]
    )
    floors["singular-values"] = floor

    radius = max(s.norm for s in sections) + 2 * max(eps_list, default=0.0)
    grid = ComplexGrid.covering(radius, resolution)
    step = (grid.re_max - grid.re_min) / (resolution - 1)
    coverage_warning = False
    for eps in eps_list:
        sets = _map(lambda A: pseudospectrum_grid(A, eps, grid), matrices, workers)
        coverage_warning = coverage_warning or any(s.coverage_warning for s in sets)
        distances = []
        for candidate in sets[:-1]:
            if candidate.is_empty or sets[-1].is_empty:
                logger.warning("empty eps=%s pseudospectrum on a grid of step %.3e", eps, step)
                distances.append(math.nan)
            else:
                distances.append(hausdorff(candidate, sets[-1]))
        name = f"pseudospectra:{eps!r}"
        tracks[name] = tuple(distances)
        floors[name] = step * (1.0 + 1e-9)

    nonincreasing = {name: is_nonincreasing(trace, slack, floors[name]) for name, trace in tracks.items()}
    for name, ok in nonincreasing.items():
        if not ok:
            logger.warning("track %s is not nonincreasing within %.0f%% slack: %s", name, 100 * slack, tracks[name])
    return SequenceReport(
        n_list=tuple(n_list),
        reference_n=reference_n,
        eps_list=tuple(eps_list),
        sections=sections,
        tracks=tracks,
        nonincreasing=nonincreasing,
        grid=grid,
        coverage_warning=coverage_warning,
        selfadjoint=selfadjoint,
        truncated=spec.symbol.truncated,
    )


# -- kernel dimension and essential norm ---------------------------------------


@dataclass(frozen=True, eq=False)
class FredholmEstimate:
    """Kernel dimension read off vanishing singular values, or ``None`` when inconclusive."""

    k: Optional[int]
    table: tuple[np.ndarray, ...]
    n_list: tuple[int, ...]
    gap_trace: tuple[float, ...] = ()
    reason: str = ""

    @property
    def conclusive(self) -> bool:
        return self.k is not None


def fredholm_kernel_estimate(
    spec: SequenceSpec,
    n_list: Sequence[int],
    gap_factor: float = 0.5,
    *,
    vanish: float = VANISH_FACTOR,
    workers: Optional[int] = None,
) -> FredholmEstimate:
    """Largest k with sigma_k(A_n) -> 0 while sigma_{k+1}(A_n) stays away from 0.

    A singular value vanishes when it is below ``vanish`` * ||A_nmax||; the
    count must agree on the last two sections, and sigma_{k+1} must stay
    above ``gap_factor`` times its running maximum along the whole trace.
    """
    n_list = _check_n_list(n_list)
    table = tuple(_map(lambda n: _singular_values(spec, n), n_list, workers))
    tolerance = vanish * float(table[-1][-1])
    counts = [int(np.sum(row < tolerance)) for row in table]
    k = counts[-1]

    def inconclusive(reason: str, gap: tuple[float, ...] = ()) -> FredholmEstimate:
        logger.warning("kernel estimate for %s inconclusive: %s", spec.label, reason)
        return FredholmEstimate(k=None, table=table, n_list=tuple(n_list), gap_trace=gap, reason=reason)

    if len(counts) > 1 and counts[-2] != k:
        return inconclusive(f"vanishing count changes from {counts[-2]} to {k}")
    if k >= len(table[-1]):
        return inconclusive("every singular value vanishes")
    gap = tuple(float(row[k]) for row in table if len(row) > k)
    running = np.maximum.accumulate(gap)
    if np.any(np.asarray(gap) < gap_factor * running):
        return inconclusive(f"sigma_{k + 1} falls below {gap_factor} of its running maximum", gap)
    return FredholmEstimate(k=k, table=table, n_list=tuple(n_list), gap_trace=gap)


@dataclass(frozen=True)
class EssentialNormEstimate:
    """Median singular value per section next to max |a| over the cluster set of the zeros."""

    analytic: Optional[float]
    medians: tuple[float, ...]
    n_list: tuple[int, ...]


def essential_norm_estimate(
    spec: SequenceSpec,
    n_list: Sequence[int],
    *,
    workers: Optional[int] = None,
) -> EssentialNormEstimate:
    n_list = _check_n_list(n_list)
    medians = tuple(float(np.median(v)) for v in _map(lambda n: _singular_values(spec, n), n_list, workers))
    if spec.u.family is None:
        analytic: Optional[float] = 0.0
    elif spec.u.family.cluster:
        values = spec.symbol.evaluate(np.array(spec.u.family.cluster, dtype=complex))
        analytic = float(np.max(np.abs(values)))
    else:
        analytic = None
    return EssentialNormEstimate(analytic=analytic, medians=medians, n_list=tuple(n_list))
