"""Experiment runners behind the command line.

Every runner takes a validated ``ExperimentConfig`` and returns an
``ExperimentResult``: a pass flag for the asserted invariants, a JSON-ready
summary and the per-n tables.  Every table row carries the resolution
parameters M, N_F and a truncation flag.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from tto_sections._blaschke import check_blaschke_condition
from tto_sections._config import ExperimentConfig
from tto_sections._fsd import (
    SequenceSpec,
    build_section,
    convergence_report,
    fredholm_kernel_estimate,
    stability_probe,
)
from tto_sections._model_space import hankel_relations, r_convergence_probe
from tto_sections._presets import kernel_spec
from tto_sections._spectra import ComplexGrid, is_nonincreasing, pseudospectrum_grid
from tto_sections._tables import Table
from tto_sections._widom import corollary_convergence_residual, section_defect, tto_widom_residual

logger = logging.getLogger(__name__)

RESOLUTION_COLUMNS = ("M", "N_F", "truncated")


@dataclass(frozen=True)
class ExperimentResult:
    kind: str
    passed: bool
    summary: dict[str, Any] = field(default_factory=dict)
    tables: tuple[Table, ...] = ()


def sequence_spec(config: ExperimentConfig) -> SequenceSpec:
    """The sequence described by ``config``: symbol, kernel terms and perturbation."""
    spec = kernel_spec(config.kernel_rank, config.blaschke(), config.symbol_a())
    return dataclasses.replace(spec, perturbation=config.perturbation_rule(), label=config.name)


def _resolution(spec: SequenceSpec) -> tuple[int, int, bool]:
    return spec.symbol.grid.M, spec.symbol.window, spec.symbol.truncated


def run_widom(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    u = config.blaschke()
    a, b = config.symbol_a(), config.symbol_second()
    rows = []
    passed = True
    for n in config.n_list:
        report = tto_widom_residual(u, a, b, u.available(n), config.N_F)
        passed = passed and report.residual_spectral < config.tolerance
        rows.append(
            (n, report.residual_spectral, report.residual_frobenius, report.M, report.N_F, report.truncation_flag)
        )
    defects = section_defect(u, a, b, config.n_list, config.N_F)
    defect_rows = [(n, g, a.grid.M, config.N_F, a.truncated or b.truncated) for n, g in zip(config.n_list, defects)]
    return ExperimentResult(
        kind="widom",
        passed=passed,
        summary={
            "max_residual": max(r[1] for r in rows),
            "tolerance": config.tolerance,
            "blaschke_sum": check_blaschke_condition(u, max(config.n_list)).partial_sum,
        },
        tables=(
            Table("residuals", ("n", "residual_spectral", "residual_frobenius") + RESOLUTION_COLUMNS, tuple(rows)),
            Table("section-defect", ("n", "defect") + RESOLUTION_COLUMNS, tuple(defect_rows)),
        ),
    )


def run_isometry(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    u = config.blaschke()
    rows = []
    passed = True
    for n in config.n_list:
        relations = hankel_relations(u, u.available(n), config.N_F)
        passed = passed and max(relations.range_residual, relations.initial_residual) < config.tolerance
        rows.append(
            (
                n,
                relations.range_residual,
                relations.initial_residual,
                relations.left_residual,
                relations.right_residual,
                relations.M,
                relations.N_F,
                relations.truncated,
            )
        )
    columns = ("n", "range_residual", "initial_residual", "left_residual", "right_residual") + RESOLUTION_COLUMNS
    return ExperimentResult(
        kind="isometry",
        passed=passed,
        summary={"max_residual": max(max(r[1], r[2]) for r in rows), "tolerance": config.tolerance},
        tables=(Table("relations", columns, tuple(rows)),),
    )


def run_stability(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    spec = sequence_spec(config)
    report = stability_probe(spec, config.n_list, config.threshold, workers=workers)
    M, N_F, truncated = _resolution(spec)
    rows = tuple(
        (n, spec.section_size(n), s, M, N_F, truncated) for n, s in zip(report.n_list, report.sigma_min_trace)
    )
    passed = report.certificate_agrees is not False
    if config.expect is not None:
        passed = passed and report.verdict.value == config.expect
    return ExperimentResult(
        kind="stability",
        passed=passed,
        summary={
            "verdict": report.verdict.value,
            "threshold": report.threshold,
            "certificate": report.certificate,
            "certificate_agrees": report.certificate_agrees,
            "expect": config.expect,
        },
        tables=(Table("sigma-min", ("n", "size", "sigma_min") + RESOLUTION_COLUMNS, rows),),
    )


def run_convergence(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    spec = sequence_spec(config)
    report = convergence_report(
        spec,
        config.n_list,
        config.eps_list,
        reference_n=config.reference_n,
        resolution=config.resolution,
        workers=workers,
    )
    M, N_F, truncated = _resolution(spec)
    distance_rows = tuple(
        (track, n, d, M, N_F, truncated)
        for track, trace in report.tracks.items()
        for n, d in zip(report.n_list, trace)
    )
    section_rows = tuple(
        (s.n, s.size, s.norm, float(s.singular_values[0]), M, N_F, truncated) for s in report.sections
    )
    return ExperimentResult(
        kind="convergence",
        passed=report.passed and not report.coverage_warning,
        summary={
            "reference_n": report.reference_n,
            "selfadjoint": report.selfadjoint,
            "nonincreasing": dict(report.nonincreasing),
            "coverage_warning": report.coverage_warning,
        },
        tables=(
            Table("distances", ("track", "n", "distance") + RESOLUTION_COLUMNS, distance_rows),
            Table("sections", ("n", "size", "norm", "sigma_min") + RESOLUTION_COLUMNS, section_rows),
        ),
    )


def run_fredholm(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    spec = sequence_spec(config)
    estimate = fredholm_kernel_estimate(spec, config.n_list, config.gap_factor, workers=workers)
    M, N_F, truncated = _resolution(spec)
    rows = tuple(
        (n, i + 1, float(s), M, N_F, truncated)
        for n, values in zip(estimate.n_list, estimate.table)
        for i, s in enumerate(values)
    )
    passed = estimate.conclusive
    if config.expect is not None:
        passed = passed and estimate.k == config.expect
    return ExperimentResult(
        kind="fredholm",
        passed=passed,
        summary={"k": estimate.k, "reason": estimate.reason, "gap_trace": estimate.gap_trace, "expect": config.expect},
        tables=(Table("singular-values", ("n", "index", "sigma") + RESOLUTION_COLUMNS, rows),),
    )


def run_pseudospectra(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    spec = sequence_spec(config)
    M, N_F, truncated = _resolution(spec)
    sections = [build_section(spec, n) for n in config.n_list]
    radius = max(A.spectral_norm() for A in sections) + 2 * max(config.eps_list)
    grid = ComplexGrid.covering(radius, config.resolution)
    rows = []
    counts: dict[str, list[int]] = {}
    coverage = False
    nested = True
    for n, A in zip(config.n_list, sections):
        previous: Optional[np.ndarray] = None
        for eps in sorted(config.eps_list):
            found = pseudospectrum_grid(A, eps, grid)
            coverage = coverage or found.coverage_warning
            if previous is not None and not np.all(np.isin(previous, found.points)):
                nested = False
            previous = found.points
            counts.setdefault(repr(eps), []).append(len(found))
            rows.extend((n, eps, complex(z), M, N_F, truncated) for z in found.points)
    return ExperimentResult(
        kind="pseudospectra",
        passed=nested and not coverage,
        summary={"grid_points": counts, "coverage_warning": coverage, "nested_in_eps": nested},
        tables=(Table("points", ("n", "eps", "z") + RESOLUTION_COLUMNS, tuple(rows)),),
    )


def run_strong_convergence(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    u = config.blaschke()
    first_mode = [1.0]
    traces = {
        mode: r_convergence_probe(u, first_mode, config.n_list, config.N_F, mode=mode)
        for mode in ("hankel", "adjoint", "reflected-projection", "projection")
    }
    traces["corollary"] = corollary_convergence_residual(u, np.ones((1, 1)), config.n_list, config.N_F)
    monotone = {name: is_nonincreasing(trace, 0.1, 1e-12) for name, trace in traces.items()}
    rows = tuple(
        (name, n, value, None, config.N_F, False) for name, trace in traces.items() for n, value in zip(config.n_list, trace)
    )
    return ExperimentResult(
        kind="strong-convergence",
        passed=all(monotone.values()),
        summary={"nonincreasing": monotone},
        tables=(Table("probes", ("probe", "n", "value") + RESOLUTION_COLUMNS, rows),),
    )


RUNNERS: dict[str, Callable[[ExperimentConfig, Optional[int]], ExperimentResult]] = {
    "widom": run_widom,
    "isometry": run_isometry,
    "stability": run_stability,
    "convergence": run_convergence,
    "fredholm": run_fredholm,
    "pseudospectra": run_pseudospectra,
    "strong-convergence": run_strong_convergence,
}


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    logger.info("running %s experiment %s", config.kind, config.name)
    return RUNNERS[config.kind](config, workers)
