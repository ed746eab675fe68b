"""Finite sections of truncated Toeplitz operators on model spaces.

Four levels of abstraction:

1. **Blaschke products and symbols** -- zeros with exact defects, Fourier
   windows with rigorous tails, classical Toeplitz and Hankel matrices
2. **Model spaces** -- the Takenaka-Malmquist frame, compressions T_u(a),
   the Hankel partial isometry R_u and the Widom-type identity
3. **Finite sections** -- stability, spectral convergence and Fredholm
   kernel estimates for sequences A_n = P_n (T_u(a) + K + G) P_n
4. **Presets and experiments** -- one-call specs and the ``tto-sections`` CLI
"""

from tto_sections._blaschke import (
    BlaschkeCheck,
    BlaschkeProduct,
    BoundaryClusterEstimate,
    Verdict,
    Zero,
    ZeroFamily,
    boundary_cluster,
    check_blaschke_condition,
    factor_eval,
    partial_product_eval,
    reflect,
)
from tto_sections._catalog import (
    FAMILIES,
    SYMBOLS,
    all_zero_prefix,
    explicit,
    geometric_radius,
    harmonic_radius,
    parse_family,
    parse_symbol,
)
from tto_sections._config import ExperimentConfig
from tto_sections._errors import (
    AliasingError,
    ConfigError,
    DomainError,
    ResolutionError,
    SpectralModeError,
    TTOSectionsError,
)
from tto_sections._fsd import (
    DecayKind,
    EssentialNormEstimate,
    FredholmEstimate,
    PerturbationRule,
    RankOneTerm,
    SequenceBuilder,
    SequenceReport,
    SequenceSpec,
    StabilityReport,
    StabilityVerdict,
    build_section,
    convergence_report,
    essential_norm_estimate,
    fredholm_kernel_estimate,
    stability_probe,
)
from tto_sections._hardy import (
    CircleGrid,
    OperatorMatrix,
    Residual,
    Symbol,
    analyze,
    classical_widom_residual,
    flip,
    hankel_matrix,
    laurent_matrix,
    toeplitz_matrix,
)
from tto_sections._model_space import (
    HankelRelations,
    TMBasis,
    TMFrame,
    TTOMatrix,
    hankel_isometry_check,
    hankel_relations,
    inner_symbol,
    projection_matrix,
    r_convergence_probe,
    r_matrix,
    tm_basis,
    tto_matrix,
)
from tto_sections._presets import kernel_spec, positive_symbol, positive_symbol_spec, shift_spec
from tto_sections._spectra import (
    ComplexGrid,
    SpectralMode,
    SpectralSet,
    hausdorff,
    pseudospectrum_grid,
    spectra,
)
from tto_sections._tables import ResultDocument, Table
from tto_sections._widom import (
    CompactCorrection,
    WidomReport,
    compact_correction,
    corollary_convergence_residual,
    section_defect,
    semicommutator_singular_values,
    tto_widom_residual,
)

__all__ = [
    # Errors
    "AliasingError",
    "ConfigError",
    "DomainError",
    "ResolutionError",
    "SpectralModeError",
    "TTOSectionsError",
    # Blaschke products
    "BlaschkeCheck",
    "BlaschkeProduct",
    "BoundaryClusterEstimate",
    "Verdict",
    "Zero",
    "ZeroFamily",
    "boundary_cluster",
    "check_blaschke_condition",
    "factor_eval",
    "partial_product_eval",
    "reflect",
    # Hardy space
    "CircleGrid",
    "OperatorMatrix",
    "Residual",
    "Symbol",
    "analyze",
    "classical_widom_residual",
    "flip",
    "hankel_matrix",
    "laurent_matrix",
    "toeplitz_matrix",
    # Model spaces
    "HankelRelations",
    "TMBasis",
    "TMFrame",
    "TTOMatrix",
    "hankel_isometry_check",
    "hankel_relations",
    "inner_symbol",
    "projection_matrix",
    "r_convergence_probe",
    "r_matrix",
    "tm_basis",
    "tto_matrix",
    # Widom identity
    "CompactCorrection",
    "WidomReport",
    "compact_correction",
    "corollary_convergence_residual",
    "section_defect",
    "semicommutator_singular_values",
    "tto_widom_residual",
    # Spectra
    "ComplexGrid",
    "SpectralMode",
    "SpectralSet",
    "hausdorff",
    "pseudospectrum_grid",
    "spectra",
    # Finite sections
    "DecayKind",
    "EssentialNormEstimate",
    "FredholmEstimate",
    "PerturbationRule",
    "RankOneTerm",
    "SequenceBuilder",
    "SequenceReport",
    "SequenceSpec",
    "StabilityReport",
    "StabilityVerdict",
    "build_section",
    "convergence_report",
    "essential_norm_estimate",
    "fredholm_kernel_estimate",
    "stability_probe",
    # Catalog and presets
    "FAMILIES",
    "SYMBOLS",
    "all_zero_prefix",
    "explicit",
    "geometric_radius",
    "harmonic_radius",
    "kernel_spec",
    "parse_family",
    "parse_symbol",
    "positive_symbol",
    "positive_symbol_spec",
    "shift_spec",
    # Experiments
    "ExperimentConfig",
    "ResultDocument",
    "Table",
]
