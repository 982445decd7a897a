import numpy as np
import pytest

from src.errors import DomainError, PoleError, SingularMatrixError
from src.felder import FelderParams, felder_rmatrix, felder_sample_filter, flip_matrix
from src.weight_core import (DynamicalMorphism, DynamicalOperator, WeightedSpace, embed,
                             equivariance_defect, intertwiner_criterion_residual, is_equivariant,
                             off_weight_mass, product_space, shifted_eval, shifted_morphism,
                             solve_checked, zero_weight_in_each_component)
from src.sampling import Sample, SampleStream


def _random_matrix(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def test_weighted_space_basics():
    V = WeightedSpace.standard(3)
    assert V.dim == 3 and V.rank == 3
    assert not V.is_zero_weight()
    assert WeightedSpace.trivial(2, 3).is_zero_weight()
    with pytest.raises(DomainError):
        V.tensor(WeightedSpace.standard(2))


def test_tensor_weights_add():
    V = WeightedSpace.standard(2)
    VV = V.tensor(V)
    assert np.allclose(VV.weights, [[2, 0], [1, 1], [1, 1], [0, 2]])
    assert len(VV.weight_classes()) == 3
    assert product_space([V, V, V]).dim == 8


def test_weights_are_read_only():
    V = WeightedSpace.standard(2)
    with pytest.raises(ValueError):
        V.weights[0, 0] = 5


def test_embed_matches_kronecker():
    rng = np.random.default_rng(1)
    A, B = _random_matrix(rng, 2), _random_matrix(rng, 3)
    assert np.allclose(embed(A, [2, 3], [2, 3], [0]), np.kron(A, np.eye(3)))
    assert np.allclose(embed(B, [2, 3], [2, 3], [1]), np.kron(np.eye(2), B))
    assert np.allclose(embed(np.kron(A, B), [2, 3, 2], [2, 3, 2], [0, 1]), np.kron(np.kron(A, B), np.eye(2)))


def test_embed_on_separated_slots():
    rng = np.random.default_rng(2)
    A, C = _random_matrix(rng, 2), _random_matrix(rng, 2)
    expected = np.einsum('ab,cd,ef->acebdf', A, np.eye(3), C).reshape(12, 12)
    assert np.allclose(embed(np.kron(A, C), [2, 3, 2], [2, 3, 2], [0, 2]), expected)


def test_embed_rectangular():
    rng = np.random.default_rng(3)
    A = _random_matrix(rng, 3, 2)
    assert np.allclose(embed(A, [2, 2], [2, 3], [1]), np.kron(np.eye(2), A))


def _diagonal_operator(V):
    """F(u, λ) = diag(λ·w_a + u) em um único fator"""
    def evaluate(u, lam):
        return np.diag(V.weights @ lam + u)
    return DynamicalOperator(evaluate, (V,), 0.3)


def test_shifted_eval_blockwise():
    V = WeightedSpace.standard(2)
    F = _diagonal_operator(V)
    lam = np.array([0.1 + 0.2j, -0.4])
    result = shifted_eval(F, 0.5, lam, (0,), 1, (V, V))
    for a in range(2):
        for b in range(2):
            shifted = lam - 0.3 * V.weights[b]
            expected = V.weights[a] @ shifted + 0.5
            assert result[a * 2 + b, a * 2 + b] == pytest.approx(expected)
    assert np.count_nonzero(result - np.diag(np.diag(result))) == 0


def test_shifted_eval_trivial_slot_is_plain():
    V = WeightedSpace.standard(2)
    C = WeightedSpace.trivial(1, 2)
    F = _diagonal_operator(V)
    lam = np.array([0.3, 0.7j])
    assert np.allclose(shifted_eval(F, 0.1, lam, (0,), 1, (V, C)), F(0.1, lam))


def test_shifted_eval_rejects_overlap():
    V = WeightedSpace.standard(2)
    F = _diagonal_operator(V)
    with pytest.raises(DomainError):
        shifted_eval(F, 0.1, np.zeros(2), (0,), 0, (V, V))


def test_shifted_output_is_weight_preserving():
    rng = np.random.default_rng(4)
    V = WeightedSpace.standard(2)
    space = V.tensor(V)
    M = _random_matrix(rng, 4) * space.same_weight()
    F = DynamicalOperator(lambda u, lam: M * np.exp(lam.sum()), (V, V), 0.2)
    result = shifted_eval(F, 0.0, np.array([0.1, 0.2]), (0, 2), 1, (V, V, V))
    total = product_space([V, V, V])
    assert is_equivariant(result, total, total)


def test_singular_predicate_raises():
    V = WeightedSpace.standard(2)
    F = DynamicalOperator(lambda u, lam: np.eye(2), (V,), 0.1, singular=lambda u, lam: abs(u) < 0.1)
    with pytest.raises(PoleError):
        F(0.0, np.zeros(2))
    assert np.allclose(F(0.5, np.zeros(2)), np.eye(2))


def test_operator_shape_is_checked():
    V = WeightedSpace.standard(2)
    F = DynamicalOperator(lambda u, lam: np.eye(3), (V,), 0.1)
    with pytest.raises(DomainError):
        F(0.0, np.zeros(2))


def test_flip_is_not_zero_weight_in_each_component():
    V = WeightedSpace.standard(2)
    assert not zero_weight_in_each_component(flip_matrix(2), V, V)
    assert equivariance_defect(flip_matrix(2), V.tensor(V), V.tensor(V)) == 0


def test_diagonal_is_zero_weight_in_each_component():
    V = WeightedSpace.standard(2)
    D = np.diag([0.5 ** 1, 1, 1, 0.5 ** 1])
    assert zero_weight_in_each_component(D, V, V)


def test_zero_weight_closed_under_adjoint_and_products():
    rng = np.random.default_rng(5)
    V, W = WeightedSpace.standard(2), WeightedSpace.standard(2)
    A = np.diag(_random_matrix(rng, 4, 1).ravel())
    B = np.kron(np.diag([1, 2]), np.diag([3, 4j]))
    assert zero_weight_in_each_component(A.conj().T, V, W)
    assert zero_weight_in_each_component(A @ B, V, W)
    assert off_weight_mass(A @ B + flip_matrix(2), V, W) == pytest.approx(1)


def test_shifted_morphism_changes_space():
    V = WeightedSpace.standard(2)
    W = WeightedSpace.trivial(3, 2)
    U = WeightedSpace.trivial(1, 2)
    f = DynamicalMorphism(lambda lam: np.ones((1, 3)) * lam[0], W, U)
    lam = np.array([2.0, 0.0])
    result = shifted_morphism(f, lam, 0.5, 1, 0, (V, W))
    assert result.shape == (2, 6)
    assert np.allclose(result[0, :3], 2.0 - 0.5)
    assert np.allclose(result[1, 3:], 2.0)


def test_solve_checked_rejects_singular():
    with pytest.raises(SingularMatrixError):
        solve_checked(np.zeros((2, 2)), np.eye(2))
    assert np.allclose(solve_checked(2 * np.eye(2), np.eye(2)), 0.5 * np.eye(2))


def test_intertwiner_criterion():
    V = WeightedSpace.standard(2)
    W = WeightedSpace.standard(2)
    L = DynamicalOperator(lambda u, lam: np.diag([1, 2 + u, 3, 4]), (V, W), 0.1)
    samples = [Sample(u=(0.3,), lam=np.zeros(2))]
    assert intertwiner_criterion_residual(np.diag([1, 5]), L, L, samples) == 0
    swap = np.array([[0, 1], [1, 0]])
    assert intertwiner_criterion_residual(swap, L, L, samples) > 0.1


def test_intertwiner_criterion_on_felder_representation():
    params = FelderParams(2, 2j, 0.31 + 0.07j)
    R = felder_rmatrix(params)
    samples = SampleStream(37, 1).draw(5, 1, 2, accept=felder_sample_filter(params))
    assert intertwiner_criterion_residual(np.eye(2), R, R, samples) <= 1e-12
    assert intertwiner_criterion_residual(2.5 * np.eye(2), R, R, samples) <= 1e-12
    mixing = np.eye(2) + 0.1 * np.array([[0, 1], [1, 0]])
    assert intertwiner_criterion_residual(mixing, R, R, samples) > 1e-3
