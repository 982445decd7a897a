"""
Formas multiplicativas, diferencial d_γ e transformações de gauge de R-matrizes
de tipo gl_n.

Índices das formas são 0-based: a componente (a₁, …, a_m) usa índices
distintos em {0, …, n−1}.
"""

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from config.settings import Config
from src.errors import DomainError, PoleError
from src.felder import alpha_positions, gl_type_mask
from src.qdybe import Representation
from src.special_functions import complex_power, qgamma
from src.weight_core import DynamicalOperator, WeightedSpace, shifted_eval

logger = logging.getLogger(__name__)

Component = Callable[[Tuple[int, ...], np.ndarray], complex]


@dataclass(eq=False)
class MultiplicativeForm:
    """
    Forma multiplicativa de grau m em posto n, avaliada sob demanda.

    Args:
        degree: grau m
        rank: posto n
        component: callable (tupla de índices, λ) → escalar não nulo
        name: rótulo para logs
    """
    degree: int
    rank: int
    component: Component
    name: str = 'form'

    def __call__(self, indices: Sequence[int], lam) -> complex:
        indices = tuple(int(a) for a in indices)
        if len(indices) != self.degree:
            raise DomainError(f"{self.name} tem grau {self.degree}, recebida tupla {indices}")
        if len(set(indices)) != len(indices) or any(not 0 <= a < self.rank for a in indices):
            raise DomainError(f"Tupla inválida {indices} para posto {self.rank}")
        value = complex(self.component(indices, np.asarray(lam, dtype=complex)))
        if value == 0 or not np.isfinite(value):
            raise PoleError(f"{self.name}{indices} não é finita e não nula em λ={lam}", index=indices)
        return value

    def tuples(self, degree: Optional[int] = None):
        return permutations(range(self.rank), self.degree if degree is None else degree)

    def __mul__(self, other: 'MultiplicativeForm') -> 'MultiplicativeForm':
        if (other.degree, other.rank) != (self.degree, self.rank):
            raise DomainError("Produto de formas de grau ou posto diferentes")
        return MultiplicativeForm(self.degree, self.rank,
                                  lambda idx, lam: self(idx, lam) * other(idx, lam),
                                  name=f"{self.name}·{other.name}")

    def inverse(self) -> 'MultiplicativeForm':
        return MultiplicativeForm(self.degree, self.rank,
                                  lambda idx, lam: 1 / self(idx, lam),
                                  name=f"{self.name}⁻¹")


def constant_form(degree: int, rank: int) -> MultiplicativeForm:
    """A forma 𝟏"""
    return MultiplicativeForm(degree, rank, lambda idx, lam: 1.0, name='1')


def one_form(functions: Sequence[Callable[[np.ndarray], complex]], name='ψ') -> MultiplicativeForm:
    """1-forma a partir de n funções escalares de λ"""
    functions = list(functions)
    return MultiplicativeForm(1, len(functions), lambda idx, lam: functions[idx[0]](lam), name=name)


def random_diagonal_one_form(rng: np.random.Generator, rank: int, scale: float = 0.3,
                             name='ψ') -> MultiplicativeForm:
    """ψ_a(λ) = exp(Σ_b C_ab λ_b + D_a λ_a²) com C, D complexos aleatórios"""
    C = scale * (rng.normal(size=(rank, rank)) + 1j * rng.normal(size=(rank, rank)))
    D = scale * (rng.normal(size=rank) + 1j * rng.normal(size=rank))

    def component(idx, lam):
        a = idx[0]
        return np.exp(C[a] @ lam + D[a] * lam[a] ** 2)

    return MultiplicativeForm(1, rank, component, name=name)


def random_two_form(rng: np.random.Generator, rank: int, scale: float = 0.5,
                    name='φ') -> MultiplicativeForm:
    """
    φ_{i,j}(λ) = exp(c_ij (λ_i − λ_j) Σ_k λ_k²), c simétrico: satisfaz a
    inversão mas em geral não é γ-fechada para posto ≥ 3.
    """
    c = scale * (rng.normal(size=(rank, rank)) + 1j * rng.normal(size=(rank, rank)))
    c = c + c.T

    def component(idx, lam):
        i, j = idx
        return np.exp(c[i, j] * (lam[i] - lam[j]) * np.sum(lam ** 2))

    return MultiplicativeForm(2, rank, component, name=name)


def rescale_argument(form: MultiplicativeForm, factor: complex) -> MultiplicativeForm:
    """λ ↦ φ(factor·λ)"""
    factor = complex(factor)
    return MultiplicativeForm(form.degree, form.rank,
                              lambda idx, lam: form(idx, factor * lam),
                              name=f"{form.name}({factor}λ)")


def _shift(lam: np.ndarray, s: int, gamma: complex) -> np.ndarray:
    shifted = np.array(lam, dtype=complex)
    shifted[s] -= gamma
    return shifted


def delta_s(f: Callable[[np.ndarray], complex], s: int, gamma: complex) -> Callable[[np.ndarray], complex]:
    """δ_s f(λ) = f(λ) / f(λ − γe_s)"""
    gamma = complex(gamma)

    def ratio(lam):
        lam = np.asarray(lam, dtype=complex)
        denominator = complex(f(_shift(lam, s, gamma)))
        if denominator == 0:
            raise PoleError(f"δ_{s}: f se anula em λ−γe_{s}", index=s)
        return complex(f(lam)) / denominator

    return ratio


def d_gamma(phi: MultiplicativeForm, gamma: complex) -> MultiplicativeForm:
    """(d_γφ)_{a₁…a_{m+1}} = Π_s (δ_{a_s} φ_{a₁…â_s…a_{m+1}})^{(−1)^{s+1}}"""
    if phi.degree + 1 > phi.rank:
        raise DomainError(f"d_γ de uma {phi.degree}-forma exige posto > {phi.degree}")
    gamma = complex(gamma)

    def component(idx, lam):
        value = 1.0 + 0j
        for s, a in enumerate(idx):
            face = idx[:s] + idx[s + 1:]
            factor = delta_s(lambda point: phi(face, point), a, gamma)(lam)
            value *= factor if s % 2 == 0 else 1 / factor
        return value

    return MultiplicativeForm(phi.degree + 1, phi.rank, component, name=f"d({phi.name})")


def form_deviation(phi: MultiplicativeForm, psi: MultiplicativeForm, samples) -> float:
    """max |ψ/φ − 1| sobre todas as tuplas e amostras"""
    if (phi.degree, phi.rank) != (psi.degree, psi.rank):
        raise DomainError("Formas de grau ou posto diferentes")
    worst = 0.0
    for sample in samples:
        for idx in phi.tuples():
            worst = max(worst, abs(psi(idx, sample.lam) / phi(idx, sample.lam) - 1))
    return worst


def closedness_residual(phi: MultiplicativeForm, gamma: complex, samples) -> float:
    """max |d_γφ − 1|; zero quando não há tuplas de grau m+1"""
    if phi.degree + 1 > phi.rank:
        return 0.0
    return form_deviation(constant_form(phi.degree + 1, phi.rank), d_gamma(phi, gamma), samples)


def is_closed(phi: MultiplicativeForm, gamma: complex, samples, tol: float = None) -> bool:
    tol = Config.FORM_TOL if tol is None else tol
    return closedness_residual(phi, gamma, samples) <= tol


def is_exact_witness(phi: MultiplicativeForm, psi: MultiplicativeForm, gamma: complex,
                     samples, tol: float = None) -> bool:
    tol = Config.FORM_TOL if tol is None else tol
    return form_deviation(phi, d_gamma(psi, gamma), samples) <= tol


def inversion_residual(phi: MultiplicativeForm, samples) -> float:
    """max |φ_{…a_{i+1},a_i…}·φ_{…a_i,a_{i+1}…} − 1| sobre transposições adjacentes"""
    worst = 0.0
    for sample in samples:
        for idx in phi.tuples():
            for i in range(phi.degree - 1):
                swapped = idx[:i] + (idx[i + 1], idx[i]) + idx[i + 2:]
                worst = max(worst, abs(phi(swapped, sample.lam) * phi(idx, sample.lam) - 1))
    return worst


# ============= TRANSFORMAÇÕES DE GAUGE =============


def gauge_scale(R: DynamicalOperator, c: Callable[[complex], complex],
                singular: Optional[Callable[[complex], bool]] = None) -> DynamicalOperator:
    """R(u,λ) ↦ c(u)R(u,λ)"""
    predicate = None if singular is None else (lambda u, lam: singular(u))
    return DynamicalOperator(lambda u, lam: c(u) * R(u, lam), R.factors, R.step,
                             singular=predicate, name=f"c·{R.name}")


def gauge_reparam(R: DynamicalOperator, a: complex, b: complex, mu=None) -> DynamicalOperator:
    """R(u,λ) ↦ R(au, bλ + μ), com passo γ/b"""
    a, b = complex(a), complex(b)
    if a == 0 or b == 0:
        raise DomainError("a e b devem ser não nulos")
    rank = R.factors[0].rank
    mu = np.zeros(rank, dtype=complex) if mu is None else np.asarray(mu, dtype=complex)
    if mu.shape != (rank,):
        raise DomainError(f"μ deve ter {rank} coordenadas")
    return DynamicalOperator(lambda u, lam: R(a * u, b * lam + mu), R.factors, R.step / b,
                             name=f"{R.name}(au,bλ+μ)")


def gl_type_defect(M: np.ndarray) -> float:
    """Maior módulo fora do padrão E_mm⊗E_ll, E_lm⊗E_ml"""
    n = int(round(np.sqrt(M.shape[0])))
    outside = np.abs(M[~gl_type_mask(n)])
    return float(outside.max()) if outside.size else 0.0


def is_gl_type(R: DynamicalOperator, samples, tol: float = None) -> bool:
    tol = Config.WEIGHT_TOL if tol is None else tol
    return all(gl_type_defect(R(s.u[0], s.lam)) <= tol for s in samples)


def gauge_twist(R: DynamicalOperator, phi: MultiplicativeForm,
                gamma: Optional[complex] = None, closed_check_samples=None) -> DynamicalOperator:
    """
    Multiplica as entradas α_{m,l} de R por φ_{m,l}(λ); β e diagonal inalteradas.

    Args:
        R: R-matriz de tipo gl_n
        phi: 2-forma γ-fechada de posto n
        gamma: passo usado na verificação de fechamento (padrão R.step)
        closed_check_samples: se dado, verifica o fechamento antes de torcer

    Raises:
        DomainError: se R sair do padrão gl_n ou φ não for fechada nas amostras
    """
    n = R.factors[0].dim
    if phi.degree != 2 or phi.rank != n:
        raise DomainError(f"A torção exige uma 2-forma de posto {n}")
    gamma = R.step if gamma is None else complex(gamma)
    if closed_check_samples is not None:
        residual = closedness_residual(phi, gamma, closed_check_samples)
        if residual > Config.FORM_TOL:
            raise DomainError(f"{phi.name} não é γ-fechada (|dφ − 1| = {residual:.3e})")
    positions = alpha_positions(n)

    def evaluate(u, lam):
        M = np.array(R(u, lam), dtype=complex)
        scale = max(1.0, float(np.max(np.abs(M))))
        if gl_type_defect(M) > Config.WEIGHT_TOL * scale:
            raise DomainError(f"{R.name} não é de tipo gl_n")
        for pair, index in positions:
            M[index, index] *= phi(pair, lam)
        return M

    return DynamicalOperator(evaluate, R.factors, R.step, name=f"{R.name}^{phi.name}")


# ============= A 2-FORMA EXPLÍCITA E SUA TESTEMUNHA =============


def staircase_rho(n: int) -> np.ndarray:
    """ρ = ((n−1)/2, (n−3)/2, …, −(n−1)/2)"""
    return np.array([(n - 1) / 2 - i for i in range(n)], dtype=complex)


def default_nome(q: complex, kappa: complex) -> complex:
    """p = q^{−2κ}, ou q^{2κ} se aquele tiver módulo ≥ 1"""
    p = complex_power(q, -2 * complex(kappa))
    if abs(p) >= 1:
        p = complex_power(q, 2 * complex(kappa))
    if not 0 < abs(p) < 1:
        raise DomainError(f"Nenhuma escolha de p = q^(±2κ) tem 0 < |p| < 1 (q={q}, κ={kappa})")
    return p


def sigma(a: int, b: int, lam, q: complex, kappa: complex, p: complex,
          rho: Optional[np.ndarray] = None) -> complex:
    """σ_{a,b}(λ) com a fórmula explícita para a > b e σ_{b,a} = 1/σ_{a,b}"""
    if a == b:
        raise DomainError("σ exige índices distintos")
    if a < b:
        return 1 / sigma(b, a, lam, q, kappa, p, rho)
    lam = np.asarray(lam, dtype=complex)
    shifted = lam if rho is None else lam + rho
    x = (shifted[a] - shifted[b]) / kappa
    step = 1 / kappa
    return (q * qgamma(1 + x + step, p) / qgamma(1 + x, p)
            * qgamma(-x, p) / qgamma(-x + step, p))


def sigma_two_form(q: complex, kappa: complex, n: int, gamma: complex = 1.0,
                   p: Optional[complex] = None) -> MultiplicativeForm:
    """φ_{i,j}(λ) = σ_{j,i}(λ/γ − ρ)"""
    q, kappa, gamma = complex(q), complex(kappa), complex(gamma)
    if kappa == 0:
        raise DomainError("κ deve ser não nulo")
    p = default_nome(q, kappa) if p is None else complex(p)
    rho = staircase_rho(n)

    def component(idx, lam):
        i, j = idx
        point = lam / gamma - rho
        return sigma(j, i, point, q, kappa, p, rho)

    return MultiplicativeForm(2, n, component, name='φ')


# Nome público da 2-forma explícita
paper_two_form = sigma_two_form


def xi_form(q: complex, n: int) -> MultiplicativeForm:
    """ξ_j(λ) = Π_{i<j} q^{λ_i}"""
    log_q = np.log(complex(q))
    return MultiplicativeForm(1, n, lambda idx, lam: np.exp(log_q * lam[:idx[0]].sum()), name='ξ')


def eta_form(kappa: complex, n: int, p: complex) -> MultiplicativeForm:
    """η_j(λ) = Π_{i<j} Γ_p((λ_{i,j}+1)/κ)^{-1}"""
    def component(idx, lam):
        j = idx[0]
        value = 1.0 + 0j
        for i in range(j):
            value /= qgamma((lam[i] - lam[j] + 1) / kappa, p)
        return value
    return MultiplicativeForm(1, n, component, name='η')


def zeta_form(kappa: complex, n: int, p: complex) -> MultiplicativeForm:
    """ζ_j(λ) = Π_{i<j} Γ_p(1 + λ_{j,i}/κ)^{-1}"""
    def component(idx, lam):
        j = idx[0]
        value = 1.0 + 0j
        for i in range(j):
            value /= qgamma(1 + (lam[j] - lam[i]) / kappa, p)
        return value
    return MultiplicativeForm(1, n, component, name='ζ')


def exactness_witness(q: complex, kappa: complex, n: int, gamma: complex = 1.0,
                      p: Optional[complex] = None) -> MultiplicativeForm:
    """
    1-forma ψ com d_γψ = sigma_two_form(q, κ, n, γ).

    Para γ = 1 é o produto ξηζ; em geral ψ(λ) = (ξηζ)(λ/γ).
    """
    q, kappa, gamma = complex(q), complex(kappa), complex(gamma)
    p = default_nome(q, kappa) if p is None else complex(p)
    product = xi_form(q, n) * eta_form(kappa, n, p) * zeta_form(kappa, n, p)
    if gamma == 1:
        return product
    return rescale_argument(product, 1 / gamma)


# ============= EQUIVALÊNCIA DE CATEGORIAS =============


def _diagonal_operator(zeta: MultiplicativeForm, V: WeightedSpace, gamma: complex,
                       power: int) -> DynamicalOperator:
    indices = range(zeta.rank)

    def evaluate(u, lam):
        return np.diag([zeta((a,), lam) ** power for a in indices])

    return DynamicalOperator(evaluate, (V,), gamma, name=f"diag({zeta.name})^{power}")


def twist_equivalence(rep: Representation, zeta: MultiplicativeForm,
                      gamma: Optional[complex] = None) -> Representation:
    """
    L̃(u,λ) = (ξ^{(1)}(λ−γh^{(2)}))^{-1} L(u,λ) ξ^{(1)}(λ), com ξ = Σ_a ζ_a^{-1} E_aa.

    Com essa escolha de ξ, a imagem de uma representação de R é uma
    representação de gauge_twist(R, d_γζ).
    """
    V, W = rep.auxiliary, rep.space
    if zeta.degree != 1 or zeta.rank != V.dim:
        raise DomainError(f"ζ deve ser uma 1-forma de posto {V.dim}")
    gamma = rep.step if gamma is None else complex(gamma)
    xi_inverse = _diagonal_operator(zeta, V, gamma, 1)
    xi = _diagonal_operator(zeta, V, gamma, -1)
    ambient = (V, W)

    def evaluate(u, lam):
        return (shifted_eval(xi_inverse, u, lam, (0,), 1, ambient)
                @ rep.L(u, lam)
                @ shifted_eval(xi, u, lam, (0,), None, ambient))

    L = DynamicalOperator(evaluate, ambient, rep.step, name=f"{rep.L.name}~")
    return Representation(W, L, name=f"{rep.name}~")


def reconstruct_twisted_rmatrix(R: DynamicalOperator, zeta: MultiplicativeForm,
                                gamma: Optional[complex] = None) -> DynamicalOperator:
    """R̃ = (ξ^{(1)}(λ−γh^{(2)}))^{-1}(ξ^{(2)}(λ))^{-1} R ξ^{(1)}(λ) ξ^{(2)}(λ−γh^{(1)})"""
    V = R.factors[0]
    gamma = R.step if gamma is None else complex(gamma)
    xi_inverse = _diagonal_operator(zeta, V, gamma, 1)
    xi = _diagonal_operator(zeta, V, gamma, -1)
    ambient = (V, V)

    def evaluate(u, lam):
        return (shifted_eval(xi_inverse, u, lam, (0,), 1, ambient)
                @ shifted_eval(xi_inverse, u, lam, (1,), None, ambient)
                @ R(u, lam)
                @ shifted_eval(xi, u, lam, (0,), None, ambient)
                @ shifted_eval(xi, u, lam, (1,), 0, ambient))

    return DynamicalOperator(evaluate, R.factors, R.step, name=f"{R.name}~")
