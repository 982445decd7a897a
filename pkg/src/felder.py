"""
R-matriz elíptica dinâmica de Felder para gl_n.

    R(u,λ) = Σ_m E_mm⊗E_mm + Σ_{m≠l} α(u,λ_ml) E_mm⊗E_ll + β(u,λ_ml) E_lm⊗E_ml

com λ_ml = λ_m − λ_l e

    α(u,λ) = θ₁(λ+γ)θ₁(u) / (θ₁(λ)θ₁(u−γ))
    β(u,λ) = θ₁(γ)θ₁(u−λ) / (θ₁(λ)θ₁(u−γ))
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.settings import Config
from src.errors import DomainError, PoleError
from src.sampling import Sample
from src.special_functions import EllipticModulus, lattice_distance, theta1
from src.weight_core import DynamicalOperator, WeightedSpace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FelderParams:
    """
    Parâmetros da R-matriz de Felder.

    Args:
        n: posto (n ≥ 2)
        tau: módulo elíptico
        gamma: passo γ, fora do reticulado ℤ+τℤ
        pole_margin: distância mínima ao reticulado aceita na avaliação
    """
    n: int
    tau: EllipticModulus
    gamma: complex
    pole_margin: float = Config.POLE_MARGIN

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n deve ser inteiro ≥ 2, recebido {self.n}")
        tau = self.tau if isinstance(self.tau, EllipticModulus) else EllipticModulus(self.tau)
        gamma = complex(self.gamma)
        if lattice_distance(gamma, tau) <= Config.LATTICE_TOL:
            raise DomainError(f"γ={gamma} está no reticulado ℤ+τℤ")
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'tau', tau)
        object.__setattr__(self, 'gamma', gamma)


def _nonzero(value: complex, what: str, index=None) -> complex:
    if abs(value) < Config.POLE_TOL:
        raise PoleError(f"{what} se anula (polo){'' if index is None else f' em {index}'}", index=index)
    return value


def felder_alpha(u: complex, lam: complex, params: FelderParams) -> complex:
    tau, gamma = params.tau, params.gamma
    theta_lam = _nonzero(theta1(lam, tau), "θ₁(λ)")
    theta_shift = _nonzero(theta1(u - gamma, tau), "θ₁(u−γ)")
    return theta1(lam + gamma, tau) / theta_lam * theta1(u, tau) / theta_shift


def felder_beta(u: complex, lam: complex, params: FelderParams) -> complex:
    tau, gamma = params.tau, params.gamma
    theta_lam = _nonzero(theta1(lam, tau), "θ₁(λ)")
    theta_shift = _nonzero(theta1(u - gamma, tau), "θ₁(u−γ)")
    return theta1(gamma, tau) / theta_lam * theta1(u - lam, tau) / theta_shift


def flip_matrix(n: int) -> np.ndarray:
    """Permutação P(v⊗w) = w⊗v em ℂⁿ⊗ℂⁿ"""
    P = np.zeros((n * n, n * n), dtype=complex)
    for m in range(n):
        for l in range(n):
            P[l * n + m, m * n + l] = 1
    return P


def gl_type_mask(n: int) -> np.ndarray:
    """Entradas permitidas para uma R-matriz de tipo gl_n"""
    mask = np.zeros((n * n, n * n), dtype=bool)
    for m in range(n):
        for l in range(n):
            mask[m * n + l, m * n + l] = True
            mask[l * n + m, m * n + l] = True
    return mask


def alpha_positions(n: int):
    """Pares (m, l), m ≠ l, com o índice da entrada α_{m,l} na matriz"""
    return [((m, l), m * n + l) for m in range(n) for l in range(n) if m != l]


def felder_rmatrix(params: FelderParams) -> DynamicalOperator:
    """R-matriz de Felder como operador dinâmico sobre ℂⁿ⊗ℂⁿ"""
    n, tau, gamma = params.n, params.tau, params.gamma
    V = WeightedSpace.standard(n)
    theta_gamma = theta1(gamma, tau)

    def evaluate(u, lam):
        theta_u = theta1(u, tau)
        theta_shift = _nonzero(theta1(u - gamma, tau), "θ₁(u−γ)")
        R = np.zeros((n * n, n * n), dtype=complex)
        for m in range(n):
            R[m * n + m, m * n + m] = 1
            for l in range(n):
                if l == m:
                    continue
                x = lam[m] - lam[l]
                theta_x = _nonzero(theta1(x, tau), f"θ₁(λ_{m}{l})", index=(m, l))
                R[m * n + l, m * n + l] = theta1(x + gamma, tau) / theta_x * theta_u / theta_shift
                R[l * n + m, m * n + l] = theta_gamma / theta_x * theta1(u - x, tau) / theta_shift
        return R

    def singular(u, lam):
        if lattice_distance(u - gamma, tau) < params.pole_margin:
            return True
        return any(lattice_distance(lam[m] - lam[l], tau) < params.pole_margin
                   for m in range(n) for l in range(m + 1, n))

    return DynamicalOperator(evaluate, (V, V), gamma, singular=singular, name=f"felder_n{n}")


def felder_sample_filter(params: FelderParams, margin: Optional[float] = None,
                         max_shift: int = 3):
    """
    Predicado de aceitação para amostras usadas com a R-matriz de Felder.

    Rejeita λ com λ_ml + kγ perto do reticulado (|k| ≤ max_shift) e
    diferenças espectrais d com d ou d − γ perto do reticulado.
    """
    margin = params.pole_margin if margin is None else margin
    tau, gamma, n = params.tau, params.gamma, params.n
    shifts = range(-max_shift, max_shift + 1)

    def accept(sample: Sample) -> bool:
        spectral = sample.differences() if len(sample.u) > 1 else list(sample.u)
        for d in spectral:
            if lattice_distance(d, tau) < margin or lattice_distance(d - gamma, tau) < margin:
                return False
        lam = sample.lam
        for m in range(n):
            for l in range(m + 1, n):
                x = lam[m] - lam[l]
                if any(lattice_distance(x + k * gamma, tau) < margin for k in shifts):
                    return False
        return True

    return accept
