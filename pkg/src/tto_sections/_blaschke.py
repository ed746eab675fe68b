"""Blaschke factors and Blaschke products.

A product is given either by a finite list of zeros or by a generator rule
(a named family) that produces the k-th zero for any k >= 1.  Zeros keep their
defect ``1 - |lambda|`` next to the complex value so that zeros whose modulus
rounds to 1.0 in floating point remain usable.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import signal

from tto_sections._errors import DomainError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# Raw complex zeros this close to the circle are rejected.
BOUNDARY_GUARD = 1e-12


class Verdict(str, Enum):
    """Outcome of the Blaschke condition check."""

    CONVERGING = "converging"
    DIVERGING = "diverging"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Zero:
    """A zero of a Blaschke product together with its exact defect ``1 - |value|``."""

    value: complex
    defect: float

    def __post_init__(self) -> None:
        if not 0.0 < self.defect <= 1.0:
            raise DomainError(f"zero {self.value!r} has defect {self.defect!r}, expected 0 < defect <= 1")

    @classmethod
    def from_complex(cls, value: Union[complex, float]) -> "Zero":
        value = complex(value)
        modulus = abs(value)
        if modulus >= 1.0 - BOUNDARY_GUARD:
            raise DomainError(f"zero {value!r} has modulus {modulus!r} >= 1 - {BOUNDARY_GUARD}")
        return cls(value=value, defect=1.0 - modulus)

    @classmethod
    def from_polar(cls, defect: float, angle: float = 0.0) -> "Zero":
        if defect >= 1.0:
            return cls(value=0j, defect=1.0)
        return cls(value=(1.0 - defect) * cmath.exp(1j * angle), defect=defect)

    @property
    def modulus(self) -> float:
        return 1.0 - self.defect

    @property
    def angle(self) -> float:
        """Argument in [0, 2*pi); zero for the origin."""
        if self.defect >= 1.0:
            return 0.0
        return cmath.phase(self.value) % TWO_PI

    @property
    def is_origin(self) -> bool:
        return self.defect >= 1.0

    def conjugate(self) -> "Zero":
        return Zero(value=self.value.conjugate(), defect=self.defect)


@dataclass(frozen=True)
class ZeroFamily:
    """A named rule producing the k-th zero (k >= 1) of an infinite product.

    ``verdict`` and ``cluster`` are the analytic Blaschke verdict and the
    analytic cluster set of the zeros on the circle.
    """

    name: str
    rule: Callable[[int], Zero]
    verdict: Verdict
    cluster: tuple[complex, ...] = ()
    params: tuple[tuple[str, float], ...] = ()

    def zero(self, k: int) -> Zero:
        if k < 1:
            raise DomainError(f"zero index must be >= 1, got {k}")
        return self.rule(k)

    def conjugate(self) -> "ZeroFamily":
        rule = self.rule
        return ZeroFamily(
            name=f"{self.name}:reflected",
            rule=lambda k: rule(k).conjugate(),
            verdict=self.verdict,
            cluster=tuple(c.conjugate() for c in self.cluster),
            params=self.params,
        )


@dataclass(frozen=True)
class BlaschkeProduct:
    """A Blaschke product given by explicit zeros or by a generator family."""

    zeros: tuple[Zero, ...] = ()
    family: Optional[ZeroFamily] = None

    def __post_init__(self) -> None:
        if self.family is not None and self.zeros:
            raise DomainError("a Blaschke product takes explicit zeros or a family, not both")
        if self.family is None and not self.zeros:
            raise DomainError("a Blaschke product needs at least one zero")

    @classmethod
    def from_zeros(cls, values: Sequence[Union[complex, float]], *, normalize: bool = True) -> "BlaschkeProduct":
        product = cls(zeros=tuple(Zero.from_complex(v) for v in values))
        return product.normalized() if normalize else product

    @classmethod
    def from_family(cls, family: ZeroFamily) -> "BlaschkeProduct":
        return cls(family=family)

    @property
    def is_finite(self) -> bool:
        return self.family is None

    @property
    def degree(self) -> Optional[int]:
        """Number of zeros of a finite product, ``None`` for generated ones."""
        return len(self.zeros) if self.family is None else None

    @property
    def name(self) -> str:
        return self.family.name if self.family is not None else "explicit"

    def materialize(self, n: int) -> tuple[Zero, ...]:
        """The first ``n`` zeros."""
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        if self.family is None:
            if n > len(self.zeros):
                raise DomainError(f"product has {len(self.zeros)} zeros, {n} requested")
            return self.zeros[:n]
        return tuple(self.family.zero(k) for k in range(1, n + 1))

    def available(self, n: int) -> int:
        """``n`` clipped to the number of zeros the product has."""
        return n if self.family is not None else min(n, len(self.zeros))

    def values(self, n: int) -> np.ndarray:
        return np.array([z.value for z in self.materialize(n)], dtype=complex)

    def defects(self, n: int) -> np.ndarray:
        return np.array([z.defect for z in self.materialize(n)], dtype=float)

    def is_ordered(self, n: Optional[int] = None) -> bool:
        """True when the moduli of the first ``n`` zeros are nondecreasing."""
        if n is None:
            if self.family is not None:
                raise DomainError("n is required for generated products")
            n = len(self.zeros)
        d = self.defects(n)
        return bool(np.all(d[1:] <= d[:-1]))

    def normalized(self) -> "BlaschkeProduct":
        """Zeros sorted by modulus, ties broken by argument and then by input order."""
        if self.family is not None:
            return self
        ordered = sorted(self.zeros, key=lambda z: (-z.defect, z.angle))
        return replace(self, zeros=tuple(ordered))

    def reflect(self) -> "BlaschkeProduct":
        if self.family is not None:
            return BlaschkeProduct(family=self.family.conjugate())
        return BlaschkeProduct(zeros=tuple(z.conjugate() for z in self.zeros))

    def evaluate(self, n: int, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        points = np.asarray(z, dtype=complex)
        result = np.ones_like(points)
        for zero in self.materialize(n):
            result = result * factor_values(zero, points)
        return complex(result) if result.ndim == 0 else result

    def taylor_coefficients(self, n: int, length: int) -> np.ndarray:
        """The first ``length`` Taylor coefficients of the partial product u_n.

        Computed by a cascade of first-order recursive filters, one per factor,
        so that no aliasing enters.
        """
        series = np.zeros(length, dtype=complex)
        series[0] = 1.0
        for zero in self.materialize(n):
            numerator, denominator = factor_filter(zero)
            series = signal.lfilter(numerator, denominator, series)
        return series


def factor_filter(zero: Zero) -> tuple[np.ndarray, np.ndarray]:
    """Numerator and denominator coefficients of b_lambda as a rational function of z."""
    if zero.is_origin:
        return np.array([0.0, 1.0], dtype=complex), np.array([1.0, 0.0], dtype=complex)
    rotation = cmath.exp(-1j * zero.angle)
    modulus = zero.modulus
    return (
        np.array([modulus, -rotation], dtype=complex),
        np.array([1.0, -modulus * rotation], dtype=complex),
    )


def factor_values(zero: Zero, z: np.ndarray) -> np.ndarray:
    if zero.is_origin:
        return z
    # In the rotated variable w the factor is ((1 - w) - d) / ((1 - w) + d w),
    # which stays finite as the modulus rounds to 1.
    w = cmath.exp(-1j * zero.angle) * z
    gap = 1.0 - w
    return (gap - zero.defect) / (gap + zero.defect * w)


def factor_eval(lam: complex, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """Evaluate the single Blaschke factor b_lambda at ``z``."""
    lam = complex(lam)
    if abs(lam) >= 1.0:
        raise DomainError(f"Blaschke factor needs |lambda| < 1, got {lam!r}")
    points = np.asarray(z, dtype=complex)
    if lam == 0:
        values = points.copy()
    else:
        values = (lam - points) / (1.0 - lam.conjugate() * points) * (abs(lam) / lam)
    return complex(values) if values.ndim == 0 else values


def partial_product_eval(u: BlaschkeProduct, n: int, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """Evaluate u_n, the product of the first ``n`` factors of ``u``."""
    return u.evaluate(n, z)


@dataclass(frozen=True)
class BlaschkeCheck:
    partial_sum: float
    verdict: Verdict


def check_blaschke_condition(u: BlaschkeProduct, n: int) -> BlaschkeCheck:
    """Partial sum of the defects together with the analytic verdict when one is known."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    partial_sum = math.fsum(u.defects(u.available(n)))
    verdict = Verdict.CONVERGING if u.family is None else u.family.verdict
    return BlaschkeCheck(partial_sum=partial_sum, verdict=verdict)


def reflect(u: BlaschkeProduct) -> BlaschkeProduct:
    """The product with conjugated zeros; on the circle it equals conj(u(1/t))."""
    return u.reflect()


@dataclass(frozen=True)
class BoundaryClusterEstimate:
    """Empirical estimate of sigma(u) on the circle from the zeros beyond a radius."""

    points: tuple[complex, ...]
    radius_used: float
    count_used: int
    warning: bool = False
    analytic: tuple[complex, ...] = field(default=())


def boundary_cluster(
    u: BlaschkeProduct,
    n: int,
    radius: float,
    *,
    angle_tolerance: float = 1e-6,
) -> BoundaryClusterEstimate:
    if not 0.0 < radius < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {radius!r}")
    zeros = [z for z in u.materialize(u.available(n)) if z.modulus >= radius and not z.is_origin]
    analytic = u.family.cluster if u.family is not None else ()
    if not zeros:
        logger.warning("no zeros of %s beyond radius %s among the first %d", u.name, radius, n)
        return BoundaryClusterEstimate(points=(), radius_used=radius, count_used=0, warning=True, analytic=analytic)

    angles = sorted(z.angle for z in zeros)
    representatives = [angles[0]]
    for angle in angles[1:]:
        if angle - representatives[-1] > angle_tolerance:
            representatives.append(angle)
    if len(representatives) > 1 and representatives[0] + TWO_PI - representatives[-1] <= angle_tolerance:
        representatives.pop()
    points = tuple(cmath.exp(1j * a) for a in representatives)
    return BoundaryClusterEstimate(points=points, radius_used=radius, count_used=len(zeros), analytic=analytic)
