from fractions import Fraction

import numpy as np
import pytest

from src.difference_solver import (AnalyticGerm, crossing_map, difference_residual,
                                   growth_bound_check, inverse_crossing_map, multilinear_amplitude,
                                   partial_transpose, solve_difference, verify_crossing_series,
                                   weight_zero_support)
from src.errors import DomainError, ResonanceError
from src.power_series import MatrixPowerSeries
from src.trigonometric import DUAL_COXETER_GL2, RHO_GL2, trigonometric_fixture
from src.weight_core import WeightedSpace

# G(y) = 3y + y², p = 3, f₁ = 1
SCALAR_GERM = [3, 1]


def _exact_scalar_coefficients(order):
    f = [Fraction(0), Fraction(1)]
    for k in range(2, order + 1):
        square = sum(f[i] * f[k - i] for i in range(1, k))
        f.append(square / (3 ** k - 3))
    return f


def _two_by_two_germ():
    S = np.array([[1.0, 0.4], [0.3, 1.0]])
    g1 = S @ np.diag([4.0, 0.5]) @ np.linalg.inv(S)
    g2 = 0.2 * np.random.default_rng(8).normal(size=(2, 2, 2))
    return AnalyticGerm.from_multilinear([g1, g2]), S


def test_scalar_solution_matches_exact_recursion():
    germ = AnalyticGerm.from_scalar_polynomial(SCALAR_GERM)
    f = solve_difference(germ, 3, 12, seed=[1])
    exact = _exact_scalar_coefficients(12)
    for k in range(13):
        assert f[k][0] == pytest.approx(float(exact[k]), rel=1e-12, abs=1e-300)
    assert np.max(difference_residual(germ, 3, f)) <= 1e-12


def test_vector_solution_from_eigen_seed():
    germ, S = _two_by_two_germ()
    f = solve_difference(germ, 4, 12, seed=S[:, 0])
    assert np.allclose(f[1], S[:, 0])
    scale = max(1.0, float(np.max(f.norms())))
    assert np.max(difference_residual(germ, 4, f)) <= 1e-10 * scale

    g1, g2 = germ.multilinear
    for k in range(2, 13):
        quadratic = sum(np.einsum('abc,b,c->a', g2, f[i], f[k - i]) for i in range(1, k))
        assert np.allclose((4 ** k * np.eye(2) - g1) @ f[k], quadratic, atol=1e-10 * scale)


def test_zero_seed_gives_zero_solution():
    g1 = np.array([[0.2, 0.1], [0.0, 0.3]])
    germ = AnalyticGerm.from_multilinear([g1, np.ones((2, 2, 2))])
    f = solve_difference(germ, 2, 5)
    assert np.all(f.c == 0)


def test_resonance_is_reported():
    with pytest.raises(ResonanceError) as info:
        solve_difference(AnalyticGerm.from_scalar_polynomial([9, 1]), 3, 4)
    assert info.value.order == 2
    with pytest.raises(ResonanceError) as info:
        solve_difference(AnalyticGerm.from_scalar_polynomial([3, 1]), 3, 4)
    assert info.value.order == 1


def test_invalid_parameters():
    germ = AnalyticGerm.from_scalar_polynomial(SCALAR_GERM)
    with pytest.raises(DomainError):
        solve_difference(germ, 0.5, 4, seed=[1])
    with pytest.raises(DomainError):
        solve_difference(germ, 3, 0, seed=[1])
    vector_germ, S = _two_by_two_germ()
    with pytest.raises(DomainError):
        solve_difference(vector_germ, 4, 4, seed=S[:, 1])


def test_multilinear_shapes_are_checked():
    with pytest.raises(DomainError):
        AnalyticGerm.from_multilinear([np.ones((2, 3))])
    with pytest.raises(DomainError):
        AnalyticGerm.from_multilinear([np.eye(2), np.ones((2, 2))])


def test_from_map_requires_fixed_point():
    with pytest.raises(DomainError):
        AnalyticGerm.from_map(lambda X: X * 2, np.eye(2))


def test_from_map_linear_part():
    M = np.array([[2.0, 1.0], [0.0, 3.0]])
    germ = AnalyticGerm.from_map(lambda X: MatrixPowerSeries.constant(M, X.order) * X, np.zeros(2))
    assert np.allclose(germ.linear_part, M)


def test_growth_bound_passes_for_solution():
    germ = AnalyticGerm.from_scalar_polynomial(SCALAR_GERM)
    f = solve_difference(germ, 3, 12, seed=[1])
    A = multilinear_amplitude(germ.multilinear)
    assert A == pytest.approx(3.03)
    report = growth_bound_check(f, A, 3)
    assert report.k0 == 4
    assert report.passed
    assert report.to_dict()['passed'] is True


def test_growth_bound_flags_inflated_coefficient():
    germ = AnalyticGerm.from_scalar_polynomial(SCALAR_GERM)
    f = solve_difference(germ, 3, 12, seed=[1])
    f.c[10] = 1e8
    report = growth_bound_check(f, multilinear_amplitude(germ.multilinear), 3)
    assert not report.passed
    assert report.failures == [10]


def test_growth_bound_for_non_resonant_system():
    # g₁ com espectro {1.5, 0.5} e p = 1.5: p^k − g₁ é invertível para k ≥ 2
    S = np.array([[1.0, 0.4], [0.3, 1.0]])
    g1 = S @ np.diag([1.5, 0.5]) @ np.linalg.inv(S)
    g2 = 0.2 * np.random.default_rng(8).normal(size=(2, 2, 2))
    germ = AnalyticGerm.from_multilinear([g1, g2])
    assert max(abs(np.linalg.eigvals(g1))) < 2
    f = solve_difference(germ, 1.5, 15, seed=S[:, 0])
    scale = max(1.0, float(np.max(f.norms())))
    assert np.max(difference_residual(germ, 1.5, f)) <= 1e-10 * scale

    A = multilinear_amplitude(germ.multilinear)
    report = growth_bound_check(f, A, 1.5)
    k0 = 1
    while not 2 * A < 1.5 ** (k0 / 2):
        k0 += 1
    assert report.k0 == k0
    assert report.B >= 1
    assert len(report.rows) == 15
    assert report.passed
    assert report.failures == []


def test_growth_bound_rejects_small_p():
    with pytest.raises(DomainError):
        growth_bound_check(MatrixPowerSeries.zeros(3, (1,)), 1.0, 0.9)


def test_partial_transpose_is_involution():
    X = np.arange(16.0).reshape(4, 4)
    Y = partial_transpose(X, (2, 2))
    assert Y[0, 3] == X[2, 1]
    assert np.array_equal(partial_transpose(Y, (2, 2)), X)


def test_crossing_map_is_birational():
    rng = np.random.default_rng(12)
    for _ in range(100):
        X = 3 * np.eye(4) + rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        Y = crossing_map(X, RHO_GL2, 0.6)
        assert np.max(np.abs(inverse_crossing_map(Y, RHO_GL2, 0.6) - X)) <= 1e-12
        assert np.max(np.abs(crossing_map(inverse_crossing_map(X, RHO_GL2, 0.6), RHO_GL2, 0.6) - X)) <= 1e-12


def test_diagonal_is_fixed_by_crossing():
    X = np.diag([1.0, 2.0, 3.0, 4.0])
    assert np.allclose(crossing_map(X, RHO_GL2, 0.6), X)


def test_weight_zero_support():
    V = WeightedSpace.standard(2)
    mask = weight_zero_support(V, V)
    assert mask.sum() == 6
    assert mask[1, 2] and mask[2, 1] and not mask[0, 1]


def test_trigonometric_fixture_is_crossing_symmetric():
    series, V, W = trigonometric_fixture(0.6, 8)
    report = verify_crossing_series(series, 0.6, 1, DUAL_COXETER_GL2, RHO_GL2, V, W)
    assert report.orientation == 'forward'
    assert report.p == pytest.approx(0.6 ** -4)
    assert report.max_residual <= 1e-8
    assert report.to_dict()['max_residual'] == report.max_residual


def test_perturbed_series_breaks_crossing():
    series, V, W = trigonometric_fixture(0.6, 8)
    series.c[3] *= 1.1
    report = verify_crossing_series(series, 0.6, 1, DUAL_COXETER_GL2, RHO_GL2, V, W)
    assert report.max_residual > 1e-6


def test_crossing_rejects_bad_input():
    series, V, W = trigonometric_fixture(0.6, 4)
    with pytest.raises(DomainError):
        verify_crossing_series(series.map_coefficients(lambda c: c[:3, :3]), 0.6, 1, 2, RHO_GL2, V, W)
    with pytest.raises(DomainError):
        verify_crossing_series(series, 1.0, 1, 2, RHO_GL2, V, W)
