"""
R-matriz trigonométrica normalizada de gl_2 (Jimbo), usada como
referência conhecida para a verificação de cruzamento.

Base (1,1), (1,2), (2,1), (2,2). Com g(z) = 1/(1 − q²z):

    a = d = 1,  b = b' = q(1 − z)g(z),
    R[(1,2),(2,1)] = z(1 − q²)g(z),  R[(2,1),(1,2)] = (1 − q²)g(z)
"""

import cmath
import logging
from typing import Callable, Sequence, Tuple

import numpy as np

from config.settings import Config
from src.errors import DomainError, PoleError
from src.power_series import MatrixPowerSeries
from src.weight_core import DynamicalOperator, WeightedSpace, embed, max_entry_norm

logger = logging.getLogger(__name__)

# Dados do cruzamento para gl_2 na representação vetorial
RHO_GL2 = np.array([0.5, -0.5])
DUAL_COXETER_GL2 = 2


def trigonometric_rmatrix(z: complex, q: complex) -> np.ndarray:
    z, q = complex(z), complex(q)
    denominator = 1 - q * q * z
    if abs(denominator) < Config.POLE_TOL:
        raise PoleError(f"Polo da R-matriz trigonométrica em z = q^(-2) = {z}")
    g = 1 / denominator
    R = np.zeros((4, 4), dtype=complex)
    R[0, 0] = R[3, 3] = 1
    R[1, 1] = R[2, 2] = q * (1 - z) * g
    R[1, 2] = z * (1 - q * q) * g
    R[2, 1] = (1 - q * q) * g
    return R


def trigonometric_operator(config) -> DynamicalOperator:
    """
    R(e^u) como operador dinâmico constante em λ, para --rmatrix.

    Com z = e^u a razão z₁/z₂ vira a diferença u₁ − u₂, e a equação
    dinâmica se reduz à de Yang-Baxter usual.

    Args:
        config: objeto com atributos q e gamma (o RunConfig da CLI)
    """
    q = complex(config.q)
    V = WeightedSpace.standard(2)
    return DynamicalOperator(lambda u, lam: trigonometric_rmatrix(cmath.exp(u), q),
                             (V, V), config.gamma, name='trigonometric')


def trigonometric_series(q: complex, order: int) -> MatrixPowerSeries:
    """Coeficientes de Taylor em z = 0 em forma fechada, com g_k = q^{2k}"""
    q = complex(q)
    if order < 0:
        raise DomainError(f"Ordem deve ser ≥ 0, recebido {order}")
    g = q ** (2 * np.arange(order + 1))
    c = np.zeros((order + 1, 4, 4), dtype=complex)
    c[0, 0, 0] = c[0, 3, 3] = 1
    c[0, 1, 1] = c[0, 2, 2] = q
    c[0, 2, 1] = 1 - q * q
    for k in range(1, order + 1):
        c[k, 1, 1] = c[k, 2, 2] = q * (g[k] - g[k - 1])
        c[k, 1, 2] = (1 - q * q) * g[k - 1]
        c[k, 2, 1] = (1 - q * q) * g[k]
    return MatrixPowerSeries(c)


def ybe_sides(R: Callable[[complex], np.ndarray], z1: complex, z2: complex,
              z3: complex, dim: int = 2) -> Tuple[np.ndarray, np.ndarray]:
    """R12(z1/z2)R13(z1/z3)R23(z2/z3) e R23(z2/z3)R13(z1/z3)R12(z1/z2)"""
    dims = [dim, dim, dim]
    r12 = embed(R(z1 / z2), dims, dims, [0, 1])
    r13 = embed(R(z1 / z3), dims, dims, [0, 2])
    r23 = embed(R(z2 / z3), dims, dims, [1, 2])
    return r12 @ r13 @ r23, r23 @ r13 @ r12


def ybe_residual(R: Callable[[complex], np.ndarray], points: Sequence[Tuple[complex, complex, complex]],
                 dim: int = 2) -> float:
    worst = 0.0
    for z1, z2, z3 in points:
        lhs, rhs = ybe_sides(R, z1, z2, z3, dim)
        worst = max(worst, max_entry_norm(lhs - rhs))
    return worst


def trigonometric_fixture(q: complex, order: int, seed: int = None, checks: int = 5,
                          tol: float = None):
    """
    Série de referência validada: confere a equação de Yang-Baxter em
    pontos sorteados e a concordância entre série e forma fechada.

    Returns:
        (série, V, W) com V = W = ℂ² de tipo gl_2
    """
    tol = Config.TOL_PASS if tol is None else tol
    seed = Config.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)

    def R(z):
        return trigonometric_rmatrix(z, q)

    points = [tuple(0.3 + 0.5 * rng.random(3) + 0.1j * rng.random(3)) for _ in range(checks)]
    residual = ybe_residual(R, points)
    if residual > tol:
        raise DomainError(f"R-matriz de referência não satisfaz Yang-Baxter (resíduo {residual:.3e})")

    series = trigonometric_series(q, order)
    z = 0.05
    ratio = max(abs(q * q * z), z)
    truncation = 4 * max(1.0, abs(q)) ** 2 * ratio ** (order + 1) / (1 - ratio)
    partial = sum(series[k] * z ** k for k in range(order + 1))
    mismatch = max_entry_norm(partial - R(z))
    if mismatch > 10 * truncation + tol:
        raise DomainError(f"Série trigonométrica difere da forma fechada ({mismatch:.3e})")

    logger.debug("Fixture trigonométrica q=%s validada (YBE %.2e)", q, residual)
    V = WeightedSpace.standard(2)
    return series, V, V
