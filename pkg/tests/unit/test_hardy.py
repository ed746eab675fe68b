"""Tests for circle grids, symbols and classical Toeplitz/Hankel matrices."""

import numpy as np
import pytest

from tto_sections._errors import AliasingError, DomainError
from tto_sections._hardy import (
    CircleGrid,
    OperatorMatrix,
    Symbol,
    analyze,
    classical_widom_residual,
    flip,
    hankel_matrix,
    laurent_matrix,
    toeplitz_matrix,
)


def random_symbol(rng, degree):
    return Symbol.from_coefficients(
        {j: complex(rng.standard_normal(), rng.standard_normal()) for j in range(-degree, degree + 1)}
    )


class TestCircleGrid:
    def test_for_window_is_power_of_two(self):
        assert CircleGrid.for_window(1).M == 16
        assert CircleGrid.for_window(100).M == 1024

    def test_weights_sum_to_one(self):
        assert CircleGrid(32).weights.sum() == pytest.approx(1.0)

    def test_window_must_fit(self):
        with pytest.raises(AliasingError):
            CircleGrid(16).check_window(8)
        CircleGrid(16).check_window(7)

    def test_minimum_size(self):
        with pytest.raises(DomainError):
            CircleGrid(1)


class TestSymbol:
    def test_monomial_values(self):
        t = Symbol.monomial(1)
        np.testing.assert_allclose(t.samples, t.grid.points, atol=1e-14)
        assert t.coefficient(1) == 1
        assert t.coefficient(5) == 0

    def test_degrees(self):
        a = Symbol.from_coefficients({-2: 1.0, 0: 3.0, 1: 0.5})
        assert a.analytic_degree == 1
        assert a.coanalytic_degree == 2
        assert a.degree == 2
        assert not a.truncated

    def test_evaluate(self):
        a = Symbol.from_coefficients({-1: 0.5, 0: 2.0, 1: 0.5})
        z = np.exp(1j * np.array([0.0, np.pi]))
        np.testing.assert_allclose(a.evaluate(z), [3.0, 1.0], atol=1e-14)
        assert a.min_real_value() == pytest.approx(1.0)
        assert a.is_real()

    def test_product_of_shift_and_backward_shift(self):
        product = Symbol.monomial(1) * Symbol.monomial(-1)
        assert product.coefficient(0) == pytest.approx(1.0)
        np.testing.assert_allclose(product.samples, 1.0, atol=1e-14)

    def test_sum_and_difference(self):
        a = Symbol.from_coefficients({0: 1.0, 1: 2.0})
        b = Symbol.from_coefficients({-3: 1.0})
        total = a + b
        assert total.coefficient(-3) == 1
        assert total.coefficient(1) == 2
        np.testing.assert_allclose((total - b).coefficients(np.arange(-3, 4)), a.coefficients(np.arange(-3, 4)))

    def test_conj(self):
        a = Symbol.from_coefficients({2: 1j})
        assert a.conj().coefficient(-2) == -1j

    def test_with_window_moves_mass_to_tail(self):
        a = Symbol.from_coefficients({-1: 0.5, 0: 2.0, 1: 0.5})
        cut = a.with_window(0)
        assert cut.tail_bound == pytest.approx(1.0)
        assert cut.truncated
        assert a.with_window(4).coefficient(1) == 0.5

    def test_window_below_degree(self):
        with pytest.raises(DomainError):
            Symbol.from_coefficients({3: 1.0}, window=2)

    def test_flip(self):
        a = Symbol.from_coefficients({1: 1.0, -2: 3.0})
        flipped = flip(a)
        assert flipped.coefficient(-1) == 1
        assert flipped.coefficient(2) == 3
        np.testing.assert_allclose(flipped.samples, a.evaluate(1 / a.grid.points), atol=1e-13)


class TestAnalyze:
    def test_trigonometric_polynomial(self):
        a = analyze(lambda t: t**2 + 3, N_F=4)
        assert a.coefficient(2) == pytest.approx(1.0)
        assert a.coefficient(0) == pytest.approx(3.0)
        assert a.tail_bound < 1e-12

    def test_tail_of_rational_function(self):
        a = analyze(lambda t: 1 / (1 - 0.5 * t), N_F=4)
        assert a.coefficient(3) == pytest.approx(0.125)
        assert a.tail_bound == pytest.approx(0.0625, rel=1e-8)
        assert a.truncated

    def test_samples_on_explicit_grid(self):
        grid = CircleGrid(32)
        a = analyze(grid.points**-1, grid, N_F=3)
        assert a.coefficient(-1) == pytest.approx(1.0)

    def test_round_trip_of_trigonometric_polynomial(self):
        p = random_symbol(np.random.default_rng(8), 8)
        grid = CircleGrid(64)
        a = analyze(p.evaluate(grid.points), grid, N_F=8)
        j = np.arange(-8, 9)
        assert np.abs(a.coefficients(j) - p.coefficients(j)).max() < 1e-13
        assert a.tail_bound < 1e-12

    def test_sample_count(self):
        with pytest.raises(DomainError):
            analyze(np.ones(10), CircleGrid(32), N_F=3)


class TestMatrices:
    def test_toeplitz(self):
        a = Symbol.from_coefficients({-1: 0.5, 0: 2.0, 1: 0.25})
        T = toeplitz_matrix(a, 3).entries
        expected = np.array([[2.0, 0.5, 0.0], [0.25, 2.0, 0.5], [0.0, 0.25, 2.0]])
        np.testing.assert_array_equal(T, expected)

    def test_hankel(self):
        a = Symbol.from_coefficients({1: 1.0, 2: 2.0})
        H = hankel_matrix(a, 3).entries
        np.testing.assert_array_equal(H, [[1, 2, 0], [2, 0, 0], [0, 0, 0]])

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_hankel_adjoint(self, seed):
        a = random_symbol(np.random.default_rng(seed), 5)
        H = hankel_matrix(a, 8).entries
        np.testing.assert_array_equal(H.conj().T, hankel_matrix(flip(a).conj(), 8).entries)

    def test_laurent_is_toeplitz_on_both_sides(self):
        a = Symbol.from_coefficients({-1: 1.0, 1: 2.0})
        L = laurent_matrix(a, 2).entries
        assert L.shape == (5, 5)
        assert L[1, 0] == 2.0
        assert L[0, 1] == 1.0

    def test_truncation_flag(self):
        a = analyze(lambda t: 1 / (1 - 0.5 * t), N_F=4)
        assert toeplitz_matrix(a, 8).truncated
        assert not toeplitz_matrix(a, 3).truncated


class TestOperatorMatrix:
    def test_compose_checks_bases(self):
        A = OperatorMatrix(np.eye(2), row_basis="fourier", col_basis="tm:x")
        with pytest.raises(DomainError):
            A @ A
        assert (A @ A.adjoint()).shape == (2, 2)

    def test_norms(self):
        A = OperatorMatrix(np.diag([3.0, 4.0]))
        assert A.spectral_norm() == pytest.approx(4.0)
        assert A.frobenius_norm() == pytest.approx(5.0)
        assert A.is_selfadjoint()

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            OperatorMatrix(np.array([[np.nan]]))


class TestClassicalWidom:
    def test_shift_pair(self):
        residual = classical_widom_residual(Symbol.monomial(1), Symbol.monomial(-1), 4, 8)
        assert residual.spectral < 1e-14
        assert not residual.truncated

    def test_random_symbols(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            a, b = random_symbol(rng, 3), random_symbol(rng, 2)
            residual = classical_widom_residual(a, b, 6, 12)
            assert residual.spectral < 1e-12

    def test_small_window_is_flagged(self):
        rng = np.random.default_rng(3)
        residual = classical_widom_residual(random_symbol(rng, 3), random_symbol(rng, 3), 4, 6)
        assert residual.truncated

    def test_order_range(self):
        with pytest.raises(DomainError):
            classical_widom_residual(Symbol.monomial(1), Symbol.monomial(1), 5, 4)
