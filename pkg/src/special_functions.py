"""
Funções especiais: primeira função theta de Jacobi e função q-Gamma.

Convenções:
    θ₁(z;τ) = 2 Σ_{n≥0} (−1)^n e^{πiτ(n+½)²} sin((2n+1)πz)
    Γ_p(x)  = (1−p)^{1−x} Π_{n≥0} (1−p^{n+1})/(1−p^{n+x})

Potências complexas a^b são sempre e^{b Log a} com o logaritmo principal.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from config.settings import Config
from src.errors import ConvergenceError, DomainError, PoleError

logger = logging.getLogger(__name__)

# Termos avaliados por bloco vetorizado
_CHUNK = 32


@dataclass(frozen=True)
class EllipticModulus:
    """Módulo τ no semiplano superior e o nome q = e^{πiτ}"""
    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise DomainError(f"Im(τ) deve ser positivo, recebido τ={tau}")
        object.__setattr__(self, 'tau', tau)

    @property
    def nome(self) -> complex:
        return cmath.exp(1j * math.pi * self.tau)


@dataclass(frozen=True)
class QNome:
    """Base p da função q-Gamma, com 0 < |p| < 1"""
    p: complex

    def __post_init__(self):
        p = complex(self.p)
        if not 0 < abs(p) < 1:
            raise DomainError(f"A base da q-Gamma exige 0 < |p| < 1, recebido p={p}")
        object.__setattr__(self, 'p', p)


def _as_modulus(tau: Union[EllipticModulus, complex]) -> EllipticModulus:
    return tau if isinstance(tau, EllipticModulus) else EllipticModulus(tau)


def _as_nome(p: Union[QNome, complex]) -> QNome:
    return p if isinstance(p, QNome) else QNome(p)


def complex_power(a, b):
    """a^b = e^{b Log a} (ramo principal); aceita escalares ou arrays"""
    result = np.exp(np.asarray(b, dtype=complex) * np.log(np.asarray(a, dtype=complex)))
    return complex(result) if np.ndim(result) == 0 else result


def lattice_distance(z: complex, tau: Union[EllipticModulus, complex]) -> float:
    """Distância de z ao reticulado ℤ+τℤ"""
    t = _as_modulus(tau).tau
    z = complex(z)
    m0 = round(z.imag / t.imag)
    best = math.inf
    for m in (m0 - 1, m0, m0 + 1):
        w = z - m * t
        k0 = round(w.real)
        for k in (k0 - 1, k0, k0 + 1):
            best = min(best, abs(w - k))
    return best


def theta1(z: complex,
           tau: Union[EllipticModulus, complex],
           eps: Optional[float] = None,
           max_terms: Optional[int] = None) -> complex:
    """
    Primeira função theta de Jacobi pela série de senos.

    A soma para no primeiro termo, já depois do pico da envoltória
    |q|^{(n+½)²} e^{(2n+1)π|Im z|}, cuja envoltória fica abaixo de
    eps vezes a soma das envoltórias anteriores.

    Args:
        z: argumento complexo
        tau: módulo (Im τ > 0)
        eps: epsilon de truncamento (padrão Config.TRUNCATION_EPS)
        max_terms: limite rígido de termos (padrão Config.MAX_TERMS)

    Raises:
        DomainError: se Im τ ≤ 0
        ConvergenceError: se o limite de termos for atingido
    """
    modulus = _as_modulus(tau)
    eps = Config.TRUNCATION_EPS if eps is None else eps
    max_terms = Config.MAX_TERMS if max_terms is None else max_terms

    z = complex(z)
    log_q_abs = -math.pi * modulus.tau.imag
    y = abs(z.imag)

    total = 0j
    scale = 0.0
    start = 0
    while start < max_terms:
        n = np.arange(start, min(start + _CHUNK, max_terms), dtype=float)
        half = n + 0.5
        envelope = np.exp(log_q_abs * half ** 2 + (2 * n + 1) * math.pi * y)
        decreasing = log_q_abs * (2 * n + 2) + 2 * math.pi * y < 0
        previous = scale + np.cumsum(envelope) - envelope
        stop = decreasing & (envelope <= eps * previous)

        count = int(np.argmax(stop)) if stop.any() else len(n)
        signs = np.where(n[:count] % 2 == 0, 1.0, -1.0)
        terms = (signs
                 * np.exp(1j * math.pi * modulus.tau * half[:count] ** 2)
                 * np.sin((2 * n[:count] + 1) * math.pi * z))
        total += terms.sum()

        if stop.any():
            logger.debug("theta1: %d termos para z=%s", start + count, z)
            return complex(2 * total)

        scale += float(envelope.sum())
        start += len(n)

    raise ConvergenceError(
        f"theta1 não convergiu em {max_terms} termos (z={z}, τ={modulus.tau})")


def qgamma_terms(x: complex, p: Union[QNome, complex], eps: Optional[float] = None) -> int:
    """Número de fatores do produto necessários para |p^{n+x}| + |p^{n+1}| < eps"""
    nome = _as_nome(p)
    eps = Config.TRUNCATION_EPS if eps is None else eps
    r = abs(nome.p)
    bound = r + abs(complex_power(nome.p, complex(x)))
    if bound <= eps:
        return 1
    return int(math.ceil(math.log(eps / bound) / math.log(r))) + 1


def qgamma(x: complex,
           p: Union[QNome, complex],
           eps: Optional[float] = None,
           max_terms: Optional[int] = None) -> complex:
    """
    Função q-Gamma Γ_p(x) pelo produto infinito truncado.

    Raises:
        DomainError: se |p| ≥ 1
        PoleError: se um fator do denominador se anula dentro de Config.POLE_TOL
        ConvergenceError: se forem necessários mais de max_terms fatores
    """
    nome = _as_nome(p)
    max_terms = Config.MAX_TERMS if max_terms is None else max_terms
    x = complex(x)

    count = qgamma_terms(x, nome, eps)
    if count > max_terms:
        raise ConvergenceError(
            f"qgamma exigiria {count} fatores (limite {max_terms}) para x={x}, p={nome.p}")

    log_p = cmath.log(nome.p)
    n = np.arange(count, dtype=float)
    numerator = 1 - np.exp((n + complex(1.0)) * log_p)
    denominator = 1 - np.exp((n + x) * log_p)

    smallest = int(np.argmin(np.abs(denominator)))
    if abs(denominator[smallest]) < Config.POLE_TOL:
        raise PoleError(f"qgamma tem polo em x={x} (fator n={smallest}) para p={nome.p}",
                        index=smallest)

    prefactor = cmath.exp((1 - x) * cmath.log(1 - nome.p))
    return complex(prefactor * np.prod(numerator / denominator))
