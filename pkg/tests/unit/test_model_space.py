"""Tests for TM frames and bases, truncated Toeplitz matrices and R_u."""

import numpy as np
import pytest
from scipy import linalg

from tto_sections._blaschke import BlaschkeProduct
from tto_sections._catalog import SYMBOLS, all_zero_prefix, explicit, geometric_radius
from tto_sections._errors import DomainError, ResolutionError
from tto_sections._hardy import Symbol, toeplitz_matrix
from tto_sections._model_space import (
    TMFrame,
    analytic_annihilation,
    hankel_isometry_check,
    hankel_relations,
    high_order,
    inner_symbol,
    projection_from_inner,
    projection_matrix,
    r_convergence_probe,
    r_matrix,
    tm_basis,
    tto_matrix,
)
from tto_sections._spectra import is_nonincreasing

SMALL = explicit([[0.3, 0.0], [0.0, 0.5], [-0.5, 0.0]])
POSITIVE = SYMBOLS["positive"].build()


def random_symbol(rng, degree):
    return Symbol.from_coefficients(
        {j: complex(rng.standard_normal(), rng.standard_normal()) for j in range(-degree, degree + 1)}
    )


class TestTMFrame:
    def test_shift_matrix_is_lower_triangular_with_zeros_on_diagonal(self):
        u = explicit([0.3, 0.5j, -0.7])
        S = TMFrame.of(u, 3).shift_matrix()
        np.testing.assert_allclose(np.diag(S), u.values(3), atol=1e-15)
        assert np.all(np.triu(S, 1) == 0)

    def test_shift_adjoint_matches_conjugate_transpose(self):
        frame = TMFrame.of(geometric_radius(0.5, phases=3), 12)
        S = frame.shift_matrix()
        adjoint = frame.apply_shift_adjoint(np.eye(12, dtype=complex))
        np.testing.assert_allclose(adjoint, S.conj().T, atol=1e-15)

    def test_shift_is_contraction(self):
        S = TMFrame.of(geometric_radius(0.5), 40).shift_matrix()
        assert linalg.svdvals(S)[0] <= 1 + 1e-12

    def test_shift_agrees_with_window_embedding(self):
        frame = TMFrame.of(SMALL, 3)
        E = frame.taylor_embedding(128)
        shifted = np.roll(E, 1, axis=0)
        shifted[0] = 0
        np.testing.assert_allclose(E.conj().T @ shifted, frame.shift_matrix(), atol=1e-12)

    def test_origin_vector_matches_kernel_values(self):
        frame = TMFrame.of(SMALL, 3)
        E = frame.taylor_embedding(8)
        np.testing.assert_allclose(frame.origin_vector(), np.conj(E[0]), atol=1e-15)

    def test_hankel_seed_matches_backward_shift_of_product(self):
        frame = TMFrame.of(SMALL, 3)
        E = frame.taylor_embedding(128)
        taylor = SMALL.taylor_coefficients(3, 129)
        np.testing.assert_allclose(frame.hankel_seed(), E.conj().T @ taylor[1:], atol=1e-12)

    def test_taylor_rows(self):
        frame = TMFrame.of(SMALL, 3)
        np.testing.assert_array_equal(frame.taylor_rows(4), frame.taylor_embedding(4).conj().T)

    def test_evaluate_matches_embedding(self):
        frame = TMFrame.of(SMALL, 3)
        points = np.exp(2j * np.pi * np.arange(8) / 8)
        E = frame.taylor_embedding(128)
        expected = np.array([np.polynomial.polynomial.polyval(points, E[:, k]) for k in range(3)]).T
        np.testing.assert_allclose(frame.evaluate(points), expected, atol=1e-12)

    def test_needs_zeros(self):
        with pytest.raises(DomainError):
            TMFrame(zeros=())


class TestTMBasis:
    def test_gram_residual(self):
        basis = tm_basis(SMALL, 3, 64)
        assert basis.gram_residual < 1e-10
        assert basis.quadrature_residual < 1e-10
        assert not basis.truncated

    def test_refines_until_resolved(self):
        basis = tm_basis(explicit([0.95]), 1, 32)
        assert basis.N_F > 32
        assert basis.gram_residual < 1e-10

    def test_resolution_cap(self):
        with pytest.raises(ResolutionError) as excinfo:
            tm_basis(geometric_radius(0.5), 16, 256)
        assert excinfo.value.max_modulus == pytest.approx(1 - 2.0**-16)

    def test_unrefined_basis_is_flagged(self):
        basis = tm_basis(explicit([0.95]), 1, 32, refine=False)
        assert basis.truncated
        assert basis.E.truncated

    def test_projection_is_idempotent(self):
        P = projection_matrix(tm_basis(SMALL, 3, 64)).entries
        np.testing.assert_allclose(P @ P, P, atol=1e-12)
        assert np.trace(P).real == pytest.approx(3.0)

    def test_filtration(self):
        u = explicit([0.3, 0.5j, 0.6, -0.7])
        projections = {n: projection_matrix(tm_basis(u, n, 128)).entries for n in range(1, 5)}
        for m in range(1, 5):
            for n in range(1, 5):
                residual = projections[m] @ projections[n] - projections[min(m, n)]
                assert linalg.norm(residual, 2) < 1e-10

    def test_projection_from_inner_function(self):
        basis = tm_basis(SMALL, 3, 32, refine=False)
        difference = projection_from_inner(SMALL, 3, 32).entries - projection_matrix(basis).entries
        assert linalg.norm(difference, 2) < 1e-12

    def test_analytic_annihilation(self):
        assert analytic_annihilation(tm_basis(SMALL, 3, 64)) < 1e-10

    def test_inner_symbol(self):
        v = inner_symbol(SMALL, 3, 64)
        np.testing.assert_allclose(np.abs(v.samples), 1.0, atol=1e-13)
        assert v.is_analytic()
        assert not v.truncated


class TestTTOMatrix:
    def test_classical_reduction(self):
        rng = np.random.default_rng(5)
        u = all_zero_prefix(prefix=16)
        for _ in range(20):
            a = random_symbol(rng, int(rng.integers(0, 6)))
            n = int(rng.integers(1, 17))
            A = tto_matrix(u, n, a).entries
            np.testing.assert_allclose(A, toeplitz_matrix(a, n).entries, atol=1e-12)

    def test_sections_are_leading_blocks(self):
        u = geometric_radius(0.5, phases=5)
        a = Symbol.from_coefficients({-2: 1.0, -1: 0.3j, 0: 2.0, 1: -0.5, 3: 0.25})
        large = tto_matrix(u, 32, a)
        small = tto_matrix(u, 16, a)
        np.testing.assert_array_equal(large.leading(16).entries, small.entries)

    def test_real_symbol_gives_selfadjoint_section(self):
        assert tto_matrix(geometric_radius(0.5), 24, POSITIVE).is_selfadjoint()

    def test_methods_agree(self):
        shift = tto_matrix(SMALL, 3, POSITIVE).entries
        embedding = tto_matrix(SMALL, 3, POSITIVE, method="embedding", N_F=64).entries
        quadrature = tto_matrix(SMALL, 3, POSITIVE, method="quadrature", N_F=64).entries
        np.testing.assert_allclose(embedding, shift, atol=1e-10)
        np.testing.assert_allclose(quadrature, shift, atol=1e-10)

    def test_truncated_shift_spectrum(self):
        zeros = [0.3, 0.5j, -0.7]
        u = BlaschkeProduct.from_zeros(zeros)
        A = tto_matrix(u, 3, SYMBOLS["shift"].build()).entries
        for lam in zeros:
            assert linalg.svdvals(A - lam * np.eye(3))[-1] < 1e-8

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            tto_matrix(SMALL, 3, POSITIVE, method="galerkin")

    def test_metadata(self):
        A = tto_matrix(geometric_radius(), 4, POSITIVE)
        assert A.n == 4
        assert A.basis_id == "tm:geometric-radius"
        assert A.matrix.row_basis == A.basis_id


class TestHankelIsometry:
    def test_inner_symbol_residuals(self):
        v = inner_symbol(SMALL, 3, 64)
        residuals = hankel_isometry_check(v, 32)
        assert residuals.res1 < 1e-10
        assert residuals.res2 < 1e-10

    def test_residual_decreases_with_window(self):
        v = inner_symbol(explicit([0.9]), 1, 256)
        coarse = hankel_isometry_check(v, 32)
        fine = hankel_isometry_check(v, 64)
        assert fine.res1 <= coarse.res1 / 2
        assert fine.res2 <= coarse.res2 / 2

    def test_rejects_non_inner_symbol(self):
        with pytest.raises(DomainError):
            hankel_isometry_check(Symbol.constant(2.0), 8)

    def test_relations(self):
        relations = hankel_relations(SMALL, 3, 64)
        assert relations.range_residual < 1e-10
        assert relations.initial_residual < 1e-10
        assert relations.left_residual < 1e-10
        assert relations.right_residual < 1e-10
        assert not relations.truncated

    def test_r_matrix_entries(self):
        R = r_matrix(SMALL, 3, 16)
        taylor = SMALL.taylor_coefficients(3, 64)
        assert R.entries[2, 3] == pytest.approx(taylor[6])
        assert not R.truncated


class TestConvergenceProbe:
    N_LIST = [2, 4, 8, 16, 32]

    @pytest.mark.parametrize("mode", ["hankel", "adjoint", "reflected-projection", "projection"])
    def test_traces_decrease(self, mode):
        trace = r_convergence_probe(geometric_radius(0.5), [1.0], self.N_LIST, 64, mode=mode)
        assert is_nonincreasing(trace, 0.1, 1e-12)
        assert trace[-1] < 0.1 * trace[0]

    def test_unknown_mode(self):
        with pytest.raises(DomainError):
            r_convergence_probe(SMALL, [1.0], [1], 8, mode="weak")

    def test_high_order(self):
        assert high_order(geometric_radius(), [4, 8]) == 64
        assert high_order(geometric_radius(), [4, 32]) == 128
        assert high_order(SMALL, [4, 32]) == 3
