from types import SimpleNamespace

import numpy as np
import pytest

from src.errors import PoleError
from src.qdybe import qdybe_residual
from src.sampling import Sample
from src.trigonometric import (trigonometric_fixture, trigonometric_operator, trigonometric_rmatrix,
                               trigonometric_series, ybe_residual)


def test_yang_baxter_holds():
    rng = np.random.default_rng(2)
    points = [tuple(0.3 + rng.random(3) + 0.2j * rng.random(3)) for _ in range(10)]
    for q in (0.6, 0.3 + 0.2j):
        assert ybe_residual(lambda z: trigonometric_rmatrix(z, q), points) <= 1e-12


def test_value_at_one():
    R = trigonometric_rmatrix(1.0, 0.6)
    assert R[1, 1] == 0
    assert np.allclose(R[[0, 3], [0, 3]], 1)


def test_series_matches_closed_form():
    q = 0.6
    series = trigonometric_series(q, 30)
    for z in (0.05, 0.2 + 0.1j):
        partial = sum(series[k] * z ** k for k in range(31))
        assert np.allclose(partial, trigonometric_rmatrix(z, q), atol=1e-12)


def test_pole():
    with pytest.raises(PoleError):
        trigonometric_rmatrix(1 / 0.36, 0.6)


def test_fixture_returns_standard_spaces():
    series, V, W = trigonometric_fixture(0.6, 5)
    assert series.order == 5
    assert V.dim == W.dim == 2


def test_operator_satisfies_dynamical_equation():
    config = SimpleNamespace(q=0.6, gamma=0.31 + 0.07j)
    R = trigonometric_operator(config)
    assert R.step == config.gamma
    samples = [Sample(u=(0.3, -0.1, 0.2j), lam=np.array([0.1, -0.4])),
               Sample(u=(0.05 + 0.1j, 0.4, -0.25), lam=np.array([0.7j, 0.2]))]
    assert qdybe_residual(R, samples) <= 1e-12
    assert np.allclose(R(0.4, np.zeros(2)), trigonometric_rmatrix(np.exp(0.4), 0.6))
