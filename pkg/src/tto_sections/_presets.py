"""Pre-built sequence specifications for the canonical experiments.

These reproduce the standard stability, spectral and kernel examples in a
single function call.
"""

from typing import Optional

import numpy as np

from tto_sections._blaschke import BlaschkeProduct
from tto_sections._catalog import SYMBOLS, all_zero_prefix, geometric_radius
from tto_sections._errors import DomainError
from tto_sections._fsd import SequenceBuilder, SequenceSpec
from tto_sections._hardy import Symbol
from tto_sections._model_space import TMFrame

# Number of TM coordinates kept for the columns T_u(a) e_i of kernel specs.
KERNEL_SUPPORT = 64


def positive_symbol() -> Symbol:
    """2 + (t + 1/t)/2, real-valued with range [1, 3]."""
    return SYMBOLS["positive"].build()


def positive_symbol_spec(u: Optional[BlaschkeProduct] = None) -> SequenceSpec:
    """Sections of T_u(2 + cos) with zeros 1 - 2**-k by default; invertible."""
    return (
        SequenceBuilder()
        .blaschke(u or geometric_radius(0.5))
        .symbol(positive_symbol())
        .label("positive")
        .build()
    )


def shift_spec(u: Optional[BlaschkeProduct] = None) -> SequenceSpec:
    """Sections of the truncated shift with a zero at the origin; every section is singular."""
    return (
        SequenceBuilder()
        .blaschke(u or all_zero_prefix(prefix=1, ratio=0.5))
        .symbol(SYMBOLS["shift"].build())
        .label("shift")
        .build()
    )


def kernel_spec(
    rank: int,
    u: Optional[BlaschkeProduct] = None,
    a: Optional[Symbol] = None,
    *,
    support: int = KERNEL_SUPPORT,
) -> SequenceSpec:
    """T_u(a)(I - sum_i e_i e_i*) for the first ``rank`` TM basis vectors e_i.

    K = -sum_i (T_u(a) e_i) e_i* is stored as rank-one terms whose left
    vectors are cut to the first ``support`` coordinates, so sections up to
    that size have a kernel of dimension exactly ``rank``.
    """
    if not 0 <= rank <= support:
        raise DomainError(f"rank must lie in [0, {support}], got {rank}")
    u = u or geometric_radius(0.5)
    a = a or positive_symbol()
    builder = SequenceBuilder().blaschke(u).symbol(a).label(f"kernel-{rank}")
    if rank:
        columns = TMFrame.of(u, u.available(support)).functional_calculus(a)
        for i in range(rank):
            unit = np.zeros(i + 1, dtype=complex)
            unit[i] = 1.0
            builder.rank_one(-1.0, columns[:, i], unit)
    return builder.build()
