"""
Solução em série de potências de f(pz) = G(f(z)) e simetria de cruzamento.

A recursão é f_k = (p^k − g₁)^{-1} [G(f₁z + … + f_{k−1}z^{k−1})]_k, com f₁
fornecido como semente da equação de primeira ordem (p − g₁)f₁ = 0.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import Config
from src.errors import DomainError, ResonanceError, SingularMatrixError
from src.power_series import MatrixPowerSeries
from src.special_functions import complex_power
from src.weight_core import WeightedSpace

logger = logging.getLogger(__name__)

SeriesMap = Callable[[MatrixPowerSeries], MatrixPowerSeries]


def _contract_last(tensor: MatrixPowerSeries, vector: MatrixPowerSeries) -> MatrixPowerSeries:
    """Contrai o último eixo de uma série de tensores com uma série vetorial"""
    order = min(tensor.order, vector.order)
    first = np.einsum('...a,a->...', tensor[0], vector[0])
    result = np.zeros((order + 1,) + first.shape, dtype=complex)
    for k in range(order + 1):
        for i in range(k + 1):
            result[k] += np.einsum('...a,a->...', tensor[i], vector[k - i])
    return MatrixPowerSeries(result)


@dataclass(eq=False)
class AnalyticGerm:
    """
    Germe analítico G com G(0) = 0, dado pela parte linear e por um compositor
    de séries f ↦ G∘f truncado na ordem de f.

    Args:
        linear_part: g₁ (d × d)
        composer: série vetorial (d,) → série vetorial (d,)
        fixed_point: origem da recentragem, quando houver
        support: máscara das entradas livres do espaço original
        multilinear: coeficientes g₁, g₂, … quando G é dado explicitamente
    """
    linear_part: np.ndarray
    composer: SeriesMap
    fixed_point: Optional[np.ndarray] = None
    support: Optional[np.ndarray] = None
    multilinear: Optional[List[np.ndarray]] = None

    @property
    def dim(self) -> int:
        return self.linear_part.shape[0]

    @classmethod
    def from_multilinear(cls, coefficients: Sequence[np.ndarray]) -> 'AnalyticGerm':
        """G(y) = Σ_r g_r(y, …, y), g_r com r+1 eixos de tamanho d"""
        coefficients = [np.asarray(g, dtype=complex) for g in coefficients]
        g1 = coefficients[0]
        if g1.ndim != 2 or g1.shape[0] != g1.shape[1]:
            raise DomainError("g₁ deve ser uma matriz quadrada")
        d = g1.shape[0]
        for r, g in enumerate(coefficients, start=1):
            if g.shape != (d,) * (r + 1):
                raise DomainError(f"g_{r} deve ter forma {(d,) * (r + 1)}, recebido {g.shape}")

        def composer(f: MatrixPowerSeries) -> MatrixPowerSeries:
            total = MatrixPowerSeries.zeros(f.order, (d,))
            for r, g in enumerate(coefficients, start=1):
                term = MatrixPowerSeries.constant(g, f.order)
                for _ in range(r):
                    term = _contract_last(term, f)
                total = total + term
            return total

        return cls(g1, composer, multilinear=coefficients)

    @classmethod
    def from_scalar_polynomial(cls, coefficients: Sequence[complex]) -> 'AnalyticGerm':
        """G(y) = Σ_r a_r y^r para y escalar (d = 1)"""
        return cls.from_multilinear([np.full((1,) * (r + 1), a, dtype=complex)
                                     for r, a in enumerate(coefficients, start=1)])

    @classmethod
    def from_map(cls, series_map: SeriesMap, fixed_point: np.ndarray,
                 support: Optional[np.ndarray] = None) -> 'AnalyticGerm':
        """
        Recentra um mapa de séries no ponto fixo X₀: Y ↦ G(X₀ + Y) − X₀,
        restrito às entradas marcadas em support.
        """
        X0 = np.asarray(fixed_point, dtype=complex)
        support = np.ones(X0.shape, dtype=bool) if support is None else np.asarray(support, dtype=bool)

        image = series_map(MatrixPowerSeries.constant(X0, 0))[0]
        defect = float(np.max(np.abs(image - X0)))
        if defect > Config.FIXED_POINT_TOL * max(1.0, float(np.max(np.abs(X0)))):
            raise DomainError(f"X₀ não é ponto fixo do mapa (defeito {defect:.3e})")

        def composer(Y: MatrixPowerSeries) -> MatrixPowerSeries:
            X = MatrixPowerSeries.constant(X0, Y.order) + MatrixPowerSeries.from_support(Y, support)
            return (series_map(X) - X0).restrict(support)

        d = int(support.sum())
        g1 = np.zeros((d, d), dtype=complex)
        for j in range(d):
            probe = MatrixPowerSeries.zeros(1, (d,))
            probe.c[1, j] = 1
            g1[:, j] = composer(probe)[1]
        return cls(g1, composer, fixed_point=X0, support=support)


def _resolvent_norm(M: np.ndarray) -> float:
    try:
        return float(np.linalg.norm(np.linalg.inv(M), 2))
    except np.linalg.LinAlgError:
        return math.inf


def solve_difference(germ: AnalyticGerm, p: complex, order: int,
                     seed: Optional[np.ndarray] = None) -> MatrixPowerSeries:
    """
    Série f = f₁z + … + f_N z^N com f(pz) = G(f(z)) até a ordem N.

    Args:
        germ: germe G
        p: |p| > 1
        order: ordem N ≥ 1
        seed: f₁; se omitido, f₁ = 0 (exige p − g₁ invertível)

    Raises:
        DomainError: parâmetros inválidos ou semente que não resolve (p − g₁)f₁ = 0
        ResonanceError: ‖(p^k − g₁)^{-1}‖ acima de Config.RESONANCE_LIMIT
    """
    p = complex(p)
    if not abs(p) > 1:
        raise DomainError(f"O solver exige |p| > 1, recebido p={p}")
    if order < 1:
        raise DomainError(f"Ordem deve ser ≥ 1, recebido {order}")

    d = germ.dim
    g1 = germ.linear_part
    identity = np.eye(d)
    f = MatrixPowerSeries.zeros(order, (d,))

    if seed is None:
        resolvent = _resolvent_norm(p * identity - g1)
        if resolvent > Config.RESONANCE_LIMIT:
            raise ResonanceError("p é autovalor de g₁: f₁ não é determinado, forneça a semente",
                                 order=1, resolvent_norm=resolvent)
    else:
        seed = np.asarray(seed, dtype=complex).reshape(d)
        defect = float(np.linalg.norm((p * identity - g1) @ seed))
        if defect > Config.SEED_TOL * max(1.0, abs(p) * float(np.linalg.norm(seed))):
            raise DomainError(f"A semente não resolve (p − g₁)f₁ = 0 (defeito {defect:.3e})")
        f.c[1] = seed

    for k in range(2, order + 1):
        M = p ** k * identity - g1
        resolvent = _resolvent_norm(M)
        if resolvent > Config.RESONANCE_LIMIT:
            raise ResonanceError(f"Ressonância na ordem {k}: ‖(p^k − g₁)^(-1)‖ = {resolvent:.3e}",
                                 order=k, resolvent_norm=resolvent)
        rhs = germ.composer(f.truncate(k))[k]
        f.c[k] = np.linalg.solve(M, rhs)
        logger.debug("ordem %d: ‖f_k‖ = %.3e, resolvente %.3e", k, np.linalg.norm(f.c[k]), resolvent)
    return f


def difference_residual(germ: AnalyticGerm, p: complex, f: MatrixPowerSeries) -> np.ndarray:
    """Norma max-entrada de [f(pz) − G(f(z))]_k para k = 0 … N"""
    difference = f.scale_argument(p) - germ.composer(f)
    return np.array([float(np.max(np.abs(ck))) if ck.size else 0.0 for ck in difference.c])


def multilinear_amplitude(coefficients: Sequence[np.ndarray], slack: float = None) -> float:
    """A = slack · max_r ‖g_r‖^{1/r}, de modo que ‖g_r‖ < A^r"""
    slack = Config.GROWTH_SLACK if slack is None else slack
    values = [np.linalg.norm(np.asarray(g).ravel()) ** (1 / r) for r, g in enumerate(coefficients, start=1)]
    return slack * max(values)


@dataclass
class GrowthReport:
    """Constantes da cota ‖f_k‖ < C·B^{k−1} e verificação por ordem"""
    k0: int
    C: float
    B: float
    rows: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row['passed'] for row in self.rows)

    @property
    def failures(self) -> List[int]:
        return [row['k'] for row in self.rows if not row['passed']]

    def to_dict(self) -> Dict:
        return {'k0': self.k0, 'C': self.C, 'B': self.B, 'passed': self.passed, 'rows': self.rows}


def growth_bound_check(f: MatrixPowerSeries, A: float, p: complex,
                       slack: float = None) -> GrowthReport:
    """
    Verifica a cota indutiva de crescimento dos coeficientes.

    k₀ é o menor k com 2A < |p|^{k/2}; como ‖g₁‖ < A isso também garante
    ‖(p^k − g₁)^{-1}‖ < 2|p|^{-k}. C limita ‖f_k‖ para k < k₀ e
    B = slack·max(1, AC/(|p|^{1/2} − 1)).
    """
    slack = Config.GROWTH_SLACK if slack is None else slack
    modulus = abs(complex(p))
    if not modulus > 1:
        raise DomainError(f"A cota de crescimento exige |p| > 1, recebido |p|={modulus}")

    k0 = 1
    while not 2 * A < modulus ** (k0 / 2):
        k0 += 1

    norms = f.norms()
    early = [norms[k] for k in range(1, min(k0, f.order + 1))]
    largest = max(early) if early else 0.0
    C = slack * largest if largest > 0 else 1.0
    B = slack * max(1.0, A * C / (math.sqrt(modulus) - 1))

    report = GrowthReport(k0=k0, C=C, B=B)
    for k in range(1, f.order + 1):
        bound = C * B ** (k - 1)
        report.rows.append({'k': k, 'norm': float(norms[k]), 'bound': float(bound),
                            'passed': bool(norms[k] < bound)})
    return report


# ============= SIMETRIA DE CRUZAMENTO =============


def partial_transpose(X: np.ndarray, dims: Tuple[int, int]) -> np.ndarray:
    """Transposição parcial no slot 1: Y[(i,j),(k,l)] = X[(k,j),(i,l)]"""
    dV, dW = dims
    return np.asarray(X).reshape(dV, dW, dV, dW).transpose(2, 1, 0, 3).reshape(dV * dW, dV * dW)


def _inverse(M: np.ndarray) -> np.ndarray:
    condition = np.linalg.cond(M)
    if not np.isfinite(condition) or condition > Config.SINGULAR_CONDITION:
        raise SingularMatrixError(f"Matriz não invertível no mapa de cruzamento (cond={condition:.3e})")
    return np.linalg.inv(M)


def _conjugators(rho_weights, q: complex, dW: int) -> Tuple[np.ndarray, np.ndarray]:
    powers = complex_power(q, 2 * np.asarray(rho_weights, dtype=complex))
    D = np.kron(np.diag(powers), np.eye(dW))
    D_inv = np.kron(np.diag(1 / powers), np.eye(dW))
    return D, D_inv


def _dims(X: np.ndarray, rho_weights) -> Tuple[int, int]:
    dV = len(rho_weights)
    if X.shape[0] % dV:
        raise DomainError(f"Dimensão {X.shape[0]} não é múltipla de dim V = {dV}")
    return dV, X.shape[0] // dV


def crossing_map(X: np.ndarray, rho_weights, q: complex) -> np.ndarray:
    """(q^{−2ρ}⊗1) · (((X^{-1})^{t₁})^{-1})^{t₁} · (q^{2ρ}⊗1)"""
    X = np.asarray(X, dtype=complex)
    dims = _dims(X, rho_weights)
    D, D_inv = _conjugators(rho_weights, q, dims[1])
    inner = partial_transpose(_inverse(partial_transpose(_inverse(X), dims)), dims)
    return D_inv @ inner @ D


def inverse_crossing_map(Y: np.ndarray, rho_weights, q: complex) -> np.ndarray:
    """Inverso birracional de crossing_map"""
    Y = np.asarray(Y, dtype=complex)
    dims = _dims(Y, rho_weights)
    D, D_inv = _conjugators(rho_weights, q, dims[1])
    Z = D @ Y @ D_inv
    return _inverse(partial_transpose(_inverse(partial_transpose(Z, dims)), dims))


def crossing_series_map(X: MatrixPowerSeries, rho_weights, q: complex,
                        inverse: bool = False) -> MatrixPowerSeries:
    """crossing_map (ou seu inverso) aplicado a uma série de matrizes"""
    dims = _dims(X[0], rho_weights)
    D, D_inv = _conjugators(rho_weights, q, dims[1])

    def transpose(series):
        return series.map_coefficients(lambda ck: partial_transpose(ck, dims))

    if inverse:
        Z = X.map_coefficients(lambda ck: D @ ck @ D_inv)
        return transpose(transpose(Z).reciprocal()).reciprocal()
    inner = transpose(transpose(X.reciprocal()).reciprocal())
    return inner.map_coefficients(lambda ck: D_inv @ ck @ D)


def normalize_projective(X: MatrixPowerSeries) -> MatrixPowerSeries:
    """Divide a série pela sua entrada [0, 0]"""
    return X * X.entry((0, 0)).reciprocal()


def weight_zero_support(V: WeightedSpace, W: WeightedSpace) -> np.ndarray:
    """Entradas de End(V⊗W) que preservam o peso"""
    return V.tensor(W).same_weight()


@dataclass
class CrossingReport:
    """Resultado da verificação de cruzamento de uma série R(z)"""
    orientation: str
    p: complex
    residuals: np.ndarray
    functional_residuals: np.ndarray
    prefactor: MatrixPowerSeries
    solution: MatrixPowerSeries

    @property
    def max_residual(self) -> float:
        return float(max(np.max(self.residuals), np.max(self.functional_residuals)))

    def to_dict(self) -> Dict:
        return {
            'orientation': self.orientation,
            'p': [self.p.real, self.p.imag],
            'residuals': [float(r) for r in self.residuals],
            'functional_residuals': [float(r) for r in self.functional_residuals],
            'max_residual': self.max_residual,
            'prefactor': [[complex(c).real, complex(c).imag] for c in self.prefactor.c],
        }


def verify_crossing_series(R: MatrixPowerSeries, q: complex, m: int, h_dual: int, rho_weights,
                           V: WeightedSpace, W: WeightedSpace,
                           normalize: bool = True) -> CrossingReport:
    """
    Verifica R(pz) ∝ S(R(z)) com p = q^{∓2mh∨} resolvendo a equação de
    diferenças no setor de peso zero a partir de R₀ e R₁.

    Usa o mapa direto quando |q^{−2mh∨}| > 1 e o inverso caso contrário.
    Com normalize=True a comparação é projetiva (entrada [0,0] igual a 1) e
    o fator s(z) = R(pz)[0,0] / S(R)(z)[0,0] é devolvido no relatório.
    """
    if R.value_shape != (V.dim * W.dim, V.dim * W.dim):
        raise DomainError(f"R deve ter forma {(V.dim * W.dim,) * 2}, recebido {R.value_shape}")
    if R.order < 1:
        raise DomainError("A verificação de cruzamento exige ordem ≥ 1")

    p = complex(complex_power(q, -2 * m * h_dual))
    inverse = not abs(p) > 1
    if inverse:
        p = complex(complex_power(q, 2 * m * h_dual))
        if not abs(p) > 1:
            raise DomainError(f"|q^(±2mh∨)| = 1: nenhuma orientação tem |p| > 1 (q={q})")
    orientation = 'inverse' if inverse else 'forward'
    logger.info("Cruzamento: orientação %s, p = %s", orientation, p)

    def series_map(X):
        return crossing_series_map(X, rho_weights, q, inverse=inverse)

    if normalize:
        target = normalize_projective(R)

        def germ_map(X):
            return normalize_projective(series_map(X))
    else:
        target, germ_map = R, series_map

    support = weight_zero_support(V, W)
    germ = AnalyticGerm.from_map(germ_map, target[0], support)
    solution = solve_difference(germ, p, target.order, seed=target[1][support])
    rebuilt = MatrixPowerSeries.constant(target[0], target.order) + MatrixPowerSeries.from_support(solution, support)
    residuals = np.array([float(np.max(np.abs(d))) for d in (target - rebuilt).c])

    functional = target.scale_argument(p) - germ_map(target)
    functional_residuals = np.array([float(np.max(np.abs(d))) for d in functional.c])

    prefactor = R.scale_argument(p).entry((0, 0)) * series_map(R).entry((0, 0)).reciprocal()
    return CrossingReport(orientation, p, residuals, functional_residuals, prefactor, solution)
