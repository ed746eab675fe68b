"""Tests for finite-section sequences: stability, spectral convergence, kernels."""

import numpy as np
import pytest

from tto_sections._catalog import explicit, geometric_radius
from tto_sections._errors import DomainError
from tto_sections._fsd import (
    DecayKind,
    PerturbationRule,
    RankOneTerm,
    SequenceBuilder,
    StabilityVerdict,
    build_section,
    convergence_report,
    essential_norm_estimate,
    fredholm_kernel_estimate,
    stability_probe,
)
from tto_sections._model_space import tto_matrix
from tto_sections._presets import kernel_spec, positive_symbol, positive_symbol_spec, shift_spec
from tto_sections._spectra import SpectralMode, spectra

N_LIST = [4, 8, 16, 32]


class TestRankOneTerm:
    def test_block(self):
        term = RankOneTerm(2.0, (1.0, 1j), (1.0,))
        block = term.block(3)
        expected = np.zeros((3, 3), dtype=complex)
        expected[0, 0] = 2.0
        expected[1, 0] = 2j
        np.testing.assert_array_equal(block, expected)
        assert term.support == 2

    def test_empty_vectors(self):
        with pytest.raises(DomainError):
            RankOneTerm(1.0, (), (1.0,))


class TestPerturbationRule:
    def test_norms(self):
        assert PerturbationRule(DecayKind.GEOMETRIC, 2.0, 0.5).norm(3) == pytest.approx(0.25)
        assert PerturbationRule(DecayKind.HARMONIC, 2.0).norm(4) == pytest.approx(0.5)

    def test_sample_is_reproducible(self):
        rule = PerturbationRule(seed=7)
        np.testing.assert_array_equal(rule.sample(6), rule.sample(6))
        assert np.linalg.norm(rule.sample(6), 2) == pytest.approx(rule.norm(6))

    def test_hermitian_sample(self):
        G = PerturbationRule(hermitian=True).sample(5)
        np.testing.assert_allclose(G, G.conj().T, atol=1e-15)

    def test_rate_range(self):
        with pytest.raises(DomainError):
            PerturbationRule(rate=1.5)


class TestSequenceBuilder:
    def test_build(self):
        spec = (
            SequenceBuilder()
            .blaschke(geometric_radius())
            .symbol(positive_symbol())
            .rank_one(1.0, [1.0], [1.0])
            .perturbation("harmonic", scale=0.1, seed=3)
            .label("demo")
            .build()
        )
        assert spec.label == "demo"
        assert len(spec.compact) == 1
        assert spec.perturbation.kind is DecayKind.HARMONIC
        assert spec.certificate is None

    def test_requires_blaschke(self):
        with pytest.raises(ValueError, match="Blaschke"):
            SequenceBuilder().symbol(positive_symbol()).build()

    def test_requires_symbol(self):
        with pytest.raises(ValueError, match="symbol"):
            SequenceBuilder().blaschke(geometric_radius()).build()


class TestBuildSection:
    def test_finite_product_saturates(self):
        spec = positive_symbol_spec(explicit([0.3, 0.5j, -0.7]))
        assert build_section(spec, 8).shape == (3, 3)

    def test_compact_term_is_added(self):
        spec = SequenceBuilder().blaschke(geometric_radius()).symbol(positive_symbol()).rank_one(1.0, [1.0], [1.0]).build()
        plain = build_section(positive_symbol_spec(), 4).entries
        np.testing.assert_allclose(build_section(spec, 4).entries - plain, np.diag([1.0, 0, 0, 0]), atol=1e-15)

    def test_selfadjoint_spec(self):
        spec = positive_symbol_spec()
        assert spec.is_selfadjoint
        assert build_section(spec, 16).is_selfadjoint()
        assert not shift_spec().is_selfadjoint

    @pytest.mark.parametrize("n", [4, 8, 16, 32])
    def test_spectrum_inside_symbol_range(self, n):
        eigenvalues = spectra(build_section(positive_symbol_spec(), n), SpectralMode.SELFADJOINT_EIGEN).points.real
        assert len(eigenvalues) == n
        assert eigenvalues.min() >= 1.0 - 1e-10
        assert eigenvalues.max() <= 3.0 + 1e-10

    def test_tto_spectrum_inside_symbol_range(self):
        u = explicit([0.3, 0.5j, -0.7, 0.9])
        eigenvalues = spectra(tto_matrix(u, 4, positive_symbol()).matrix, SpectralMode.SELFADJOINT_EIGEN).points.real
        assert np.all((eigenvalues >= 1.0 - 1e-10) & (eigenvalues <= 3.0 + 1e-10))


class TestStabilityProbe:
    def test_positive_symbol_is_stable(self):
        report = stability_probe(positive_symbol_spec(), N_LIST)
        assert report.verdict is StabilityVerdict.STABLE
        assert min(report.sigma_min_trace) >= 1 - 1e-10
        assert report.certificate == pytest.approx(1.0)
        assert report.certificate_agrees is True

    def test_truncated_shift_is_unstable(self):
        report = stability_probe(shift_spec(), N_LIST)
        assert report.verdict is StabilityVerdict.UNSTABLE
        assert max(report.sigma_min_trace) < 1e-10
        assert report.certificate is None

    def test_parallel_matches_sequential(self):
        sequential = stability_probe(positive_symbol_spec(), N_LIST)
        parallel = stability_probe(positive_symbol_spec(), N_LIST, workers=3)
        assert sequential.sigma_min_trace == parallel.sigma_min_trace

    def test_needs_three_orders(self):
        with pytest.raises(DomainError):
            stability_probe(positive_symbol_spec(), [4, 8])

    def test_orders_increase(self):
        with pytest.raises(DomainError):
            stability_probe(positive_symbol_spec(), [4, 4, 8])


class TestConvergenceReport:
    def test_selfadjoint_tracks(self):
        report = convergence_report(positive_symbol_spec(), N_LIST, (0.1,), reference_n=64)
        assert report.selfadjoint
        assert set(report.tracks) == {"eigenvalues", "singular-values", "pseudospectra:0.1"}
        assert all(len(trace) == len(N_LIST) for trace in report.tracks.values())
        assert report.passed
        assert not report.coverage_warning

    def test_default_reference(self):
        report = convergence_report(shift_spec(), [2, 4], (0.2,), resolution=31)
        assert report.reference_n == 8
        assert "eigenvalues" not in report.tracks
        assert [s.n for s in report.sections] == [2, 4, 8]

    def test_reference_below_largest_order(self):
        with pytest.raises(DomainError):
            convergence_report(positive_symbol_spec(), [4, 8], reference_n=6)


class TestFredholmKernelEstimate:
    @pytest.mark.parametrize("rank", [0, 1, 2])
    def test_detects_kernel_dimension(self, rank):
        estimate = fredholm_kernel_estimate(kernel_spec(rank), [8, 16, 32, 64])
        assert estimate.k == rank
        last = estimate.table[-1]
        norm = last[-1]
        if rank:
            assert last[rank - 1] < 1e-6 * norm
            assert last[rank] > 0.1 * max(estimate.gap_trace)

    def test_changing_count_is_inconclusive(self):
        estimate = fredholm_kernel_estimate(kernel_spec(2), [1, 8])
        assert not estimate.conclusive
        assert "changes" in estimate.reason


class TestEssentialNormEstimate:
    def test_medians_approach_symbol_at_cluster_point(self):
        estimate = essential_norm_estimate(positive_symbol_spec(), [8, 16, 32, 64])
        assert estimate.analytic == pytest.approx(3.0)
        assert abs(estimate.medians[-1] - 3.0) < 0.25

    def test_finite_product(self):
        estimate = essential_norm_estimate(positive_symbol_spec(explicit([0.5])), [1, 2])
        assert estimate.analytic == 0.0
