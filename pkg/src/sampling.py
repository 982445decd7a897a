"""
Amostragem genérica determinística de pontos (u, λ).

Cada amostra i, tentativa j, do fluxo s usa um gerador próprio derivado de
SeedSequence(seed, spawn_key=(s, i, j)); pedir mais amostras não altera
as anteriores.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from config.settings import Config
from src.errors import DomainError, PoleError, SingularMatrixError

logger = logging.getLogger(__name__)

# Fluxo fixo por comando do CLI
STREAMS = {
    'verify-qdybe': 1,
    'gauge': 2,
    'solve-difference': 3,
    'export-samples': 4,
    'diagnose': 5,
}


@dataclass(frozen=True, eq=False)
class Sample:
    """Parâmetros espectrais u₁…u_k e vetor dinâmico λ"""
    u: Tuple[complex, ...]
    lam: np.ndarray

    def differences(self) -> List[complex]:
        """u_i − u_j para todos os pares ordenados i ≠ j"""
        return [a - b for i, a in enumerate(self.u) for j, b in enumerate(self.u) if i != j]


Predicate = Callable[[Sample], bool]


class SampleStream:
    """
    Fluxo pseudoaleatório de amostras genéricas.

    Args:
        seed: semente registrada nos relatórios
        stream: identificador do fluxo (ver STREAMS)
        radius: raio do disco dos u
        lam_real: meia largura da parte real de λ
        lam_imag: meia largura da parte imaginária de λ
        stagger: deslocamento imaginário stagger·j somado à coordenada j de λ
    """

    def __init__(self, seed: int, stream: int = 0,
                 radius: float = None, lam_real: float = None, lam_imag: float = None,
                 stagger: float = 0.0):
        self.seed = int(seed)
        self.stream = int(stream)
        self.radius = Config.SPECTRAL_RADIUS if radius is None else radius
        self.lam_real = Config.LAMBDA_REAL_BOX if lam_real is None else lam_real
        self.lam_imag = Config.LAMBDA_IMAG_BOX if lam_imag is None else lam_imag
        self.stagger = stagger

    def generator(self, index: int, attempt: int = 0) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream, index, attempt))
        return np.random.default_rng(sequence)

    def draw_one(self, index: int, attempt: int, n_u: int, rank: int) -> Sample:
        rng = self.generator(index, attempt)
        radii = self.radius * np.sqrt(rng.random(n_u))
        angles = 2 * math.pi * rng.random(n_u)
        u = tuple(complex(r * np.exp(1j * a)) for r, a in zip(radii, angles))
        real = self.lam_real * rng.uniform(-1, 1, rank)
        imag = self.lam_imag * rng.uniform(-1, 1, rank) + self.stagger * np.arange(rank)
        return Sample(u=u, lam=real + 1j * imag)

    def draw(self, count: int, n_u: int, rank: int,
             accept: Optional[Predicate] = None,
             max_attempts: int = None) -> List[Sample]:
        """
        Sorteia count amostras aceitas pelo predicado.

        Amostras em que o predicado é falso ou levanta PoleError /
        SingularMatrixError são sorteadas de novo.
        """
        if count < 1:
            raise DomainError(f"Número de amostras deve ser ≥ 1, recebido {count}")
        max_attempts = Config.MAX_RESAMPLE_ATTEMPTS if max_attempts is None else max_attempts

        samples = []
        rejected = 0
        for index in range(count):
            for attempt in range(max_attempts):
                sample = self.draw_one(index, attempt, n_u, rank)
                if accept is None or _accepts(accept, sample):
                    samples.append(sample)
                    break
                rejected += 1
            else:
                raise PoleError(f"Nenhuma amostra genérica em {max_attempts} tentativas (índice {index})")

        if rejected:
            logger.debug("Amostragem: %d amostras, %d rejeitadas", count, rejected)
        return samples


def _accepts(accept: Predicate, sample: Sample) -> bool:
    try:
        return bool(accept(sample))
    except (PoleError, SingularMatrixError):
        return False


def all_of(*predicates: Predicate) -> Predicate:
    """Combina predicados de aceitação"""
    return lambda sample: all(predicate(sample) for predicate in predicates)


def evaluation_probe(evaluate: Callable[[Sample], object]) -> Predicate:
    """Aceita a amostra se a avaliação termina com valores finitos"""
    def accept(sample: Sample) -> bool:
        value = evaluate(sample)
        return bool(np.all(np.isfinite(np.asarray(value, dtype=complex))))
    return accept


def condition_probe(operator, limit: float = None) -> Predicate:
    """Aceita a amostra se cond(operator(u₁, λ)) fica abaixo do limite"""
    limit = Config.SAMPLE_CONDITION_LIMIT if limit is None else limit

    def accept(sample: Sample) -> bool:
        return bool(np.linalg.cond(operator(sample.u[0], sample.lam)) < limit)
    return accept
