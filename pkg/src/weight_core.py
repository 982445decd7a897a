"""
Espaços com pesos, operadores dinâmicos e o deslocamento λ − γh^{(k)}.

As matrizes são densas e indexadas pela base tensorial lexicográfica:
o índice (a₁, …, a_k) de V₁⊗…⊗V_k corresponde a a₁·d₂⋯d_k + … + a_k.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import Config
from src.errors import DomainError, PoleError, SingularMatrixError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class WeightedSpace:
    """
    Espaço de dimensão finita com um vetor peso por elemento da base.

    Args:
        weights: array (dim, rank) de pesos complexos
        name: rótulo opcional para logs e relatórios
    """
    weights: np.ndarray
    name: str = ''

    def __post_init__(self):
        weights = np.atleast_2d(np.asarray(self.weights, dtype=complex))
        if weights.ndim != 2 or weights.shape[0] == 0:
            raise DomainError(f"Pesos devem formar um array (dim, rank), recebido {weights.shape}")
        weights.setflags(write=False)
        self.weights = weights

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    @property
    def rank(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def standard(cls, n: int) -> 'WeightedSpace':
        """ℂⁿ com os vetores da base canônica como pesos (tipo gl_n)"""
        return cls(np.eye(n), name=f"C{n}")

    @classmethod
    def trivial(cls, dim: int, rank: int) -> 'WeightedSpace':
        """Espaço de dimensão dim com todos os pesos nulos"""
        return cls(np.zeros((dim, rank)), name=f"C{dim}_0")

    def tensor(self, other: 'WeightedSpace') -> 'WeightedSpace':
        """Produto tensorial: os pesos se somam"""
        if other.rank != self.rank:
            raise DomainError(f"Ranks incompatíveis: {self.rank} e {other.rank}")
        weights = (self.weights[:, None, :] + other.weights[None, :, :]).reshape(-1, self.rank)
        name = f"{self.name}x{other.name}" if self.name and other.name else ''
        return WeightedSpace(weights, name=name)

    def is_zero_weight(self, tol: float = None) -> bool:
        tol = Config.WEIGHT_TOL if tol is None else tol
        return bool(np.all(np.abs(self.weights) <= tol))

    def weight_classes(self, tol: float = None) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Agrupa índices de mesmo peso: lista de (peso, máscara booleana)"""
        tol = Config.WEIGHT_TOL if tol is None else tol
        classes = []
        assigned = np.zeros(self.dim, dtype=bool)
        for a in range(self.dim):
            if assigned[a]:
                continue
            mask = np.all(np.abs(self.weights - self.weights[a]) <= tol, axis=1) & ~assigned
            assigned |= mask
            classes.append((self.weights[a], mask))
        return classes

    def same_weight(self, tol: float = None) -> np.ndarray:
        """Matriz booleana (dim, dim): True onde os pesos coincidem"""
        tol = Config.WEIGHT_TOL if tol is None else tol
        diff = self.weights[:, None, :] - self.weights[None, :, :]
        return np.all(np.abs(diff) <= tol, axis=2)


def product_space(spaces: Sequence[WeightedSpace]) -> WeightedSpace:
    result = spaces[0]
    for space in spaces[1:]:
        result = result.tensor(space)
    return result


@dataclass(eq=False)
class DynamicalOperator:
    """
    Função meromorfa (u, λ) ↦ matriz sobre o produto dos fatores.

    Args:
        func: callable (u, λ) → matriz (dim_out × dim_in)
        factors: espaços de entrada, na ordem dos slots
        step: passo dinâmico γ
        singular: predicado opcional (u, λ) → bool; avaliar onde é True levanta PoleError
        out_factors: espaços de saída quando diferem dos de entrada
        name: rótulo para logs
    """
    func: Callable[[complex, np.ndarray], np.ndarray]
    factors: Tuple[WeightedSpace, ...]
    step: complex
    singular: Optional[Callable[[complex, np.ndarray], bool]] = None
    out_factors: Optional[Tuple[WeightedSpace, ...]] = None
    name: str = 'operator'

    def __post_init__(self):
        self.factors = tuple(self.factors)
        self.out_factors = self.factors if self.out_factors is None else tuple(self.out_factors)
        self.step = complex(self.step)

    @property
    def in_dims(self) -> Tuple[int, ...]:
        return tuple(space.dim for space in self.factors)

    @property
    def out_dims(self) -> Tuple[int, ...]:
        return tuple(space.dim for space in self.out_factors)

    def __call__(self, u: complex, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=complex)
        if self.singular is not None and self.singular(u, lam):
            raise PoleError(f"{self.name} singular em u={u}, λ={lam}")
        matrix = np.asarray(self.func(u, lam), dtype=complex)
        expected = (int(np.prod(self.out_dims)), int(np.prod(self.in_dims)))
        if matrix.shape != expected:
            raise DomainError(f"{self.name} devolveu forma {matrix.shape}, esperado {expected}")
        return matrix

    @classmethod
    def constant(cls, matrix, factors, step, name='constant') -> 'DynamicalOperator':
        matrix = np.asarray(matrix, dtype=complex)
        return cls(lambda u, lam: matrix, factors, step, name=name)

    @classmethod
    def identity(cls, factors, step) -> 'DynamicalOperator':
        dim = int(np.prod([space.dim for space in factors]))
        return cls.constant(np.eye(dim), factors, step, name='identity')


@dataclass(eq=False)
class DynamicalMorphism:
    """Função meromorfa λ ↦ Hom_𝔞(W, U)"""
    func: Callable[[np.ndarray], np.ndarray]
    source: WeightedSpace
    target: WeightedSpace
    name: str = 'morphism'

    def __call__(self, lam) -> np.ndarray:
        matrix = np.asarray(self.func(np.asarray(lam, dtype=complex)), dtype=complex)
        if matrix.shape != (self.target.dim, self.source.dim):
            raise DomainError(f"{self.name} devolveu forma {matrix.shape}, "
                              f"esperado {(self.target.dim, self.source.dim)}")
        return matrix

    @classmethod
    def identity(cls, space: WeightedSpace) -> 'DynamicalMorphism':
        eye = np.eye(space.dim, dtype=complex)
        return cls(lambda lam: eye, space, space, name='identity')


def embed(block: np.ndarray,
          in_dims: Sequence[int],
          out_dims: Sequence[int],
          slots: Sequence[int]) -> np.ndarray:
    """
    Imerge um operador que age nos slots indicados no produto tensorial completo.

    O bloco vai de ⊗_{s∈slots} in_dims[s] para ⊗_{s∈slots} out_dims[s];
    nos demais slots age como identidade (in_dims[s] == out_dims[s]).
    """
    k = len(in_dims)
    slots = list(slots)
    rest = [s for s in range(k) if s not in slots]
    if any(in_dims[s] != out_dims[s] for s in rest):
        raise DomainError("Slots fora da ação devem ter dimensões iguais na entrada e na saída")

    order = slots + rest
    rest_dim = int(np.prod([in_dims[s] for s in rest])) if rest else 1
    full = np.kron(block, np.eye(rest_dim))

    in_shape = [in_dims[s] for s in order]
    out_shape = [out_dims[s] for s in order]
    tensor = full.reshape(out_shape + in_shape)
    inverse = list(np.argsort(order))
    axes = inverse + [k + i for i in inverse]
    return tensor.transpose(axes).reshape(int(np.prod(out_dims)), int(np.prod(in_dims)))


def _shifted(evaluate: Callable[[np.ndarray], np.ndarray],
             lam: np.ndarray,
             step: complex,
             in_spaces: Sequence[WeightedSpace],
             out_spaces: Sequence[WeightedSpace],
             slots: Sequence[int],
             shift_slot: Optional[int]) -> np.ndarray:
    in_dims = [space.dim for space in in_spaces]
    out_dims = [space.dim for space in out_spaces]
    lam = np.asarray(lam, dtype=complex)

    if shift_slot is None:
        return embed(evaluate(lam), in_dims, out_dims, slots)
    if shift_slot in slots:
        raise DomainError(f"Slot de deslocamento {shift_slot} coincide com slots de ação {tuple(slots)}")

    total = np.zeros((int(np.prod(out_dims)), int(np.prod(in_dims))), dtype=complex)
    for weight, mask in in_spaces[shift_slot].weight_classes():
        block = evaluate(lam - step * weight)
        projector = np.diag(mask.astype(complex))
        total += embed(np.kron(block, projector), in_dims, out_dims, list(slots) + [shift_slot])
    return total


def shifted_eval(F: DynamicalOperator,
                 u: complex,
                 lam,
                 slots: Sequence[int],
                 shift_slot: Optional[int] = None,
                 ambient: Optional[Sequence[WeightedSpace]] = None,
                 ambient_out: Optional[Sequence[WeightedSpace]] = None) -> np.ndarray:
    """
    Avalia F(u, λ − γh^{(k)}) nos slots indicados do produto ambiente.

    Em cada componente de peso μ do slot k age por F(u, λ−γμ);
    sem shift_slot é a avaliação simples F(u, λ) ⊗ id.

    Args:
        F: operador dinâmico sobre os fatores dos slots de ação
        u: parâmetro espectral
        lam: vetor λ
        slots: slots do ambiente onde F age (na ordem dos fatores de F)
        shift_slot: slot k cujo peso desloca λ, ou None
        ambient: espaços do produto completo
        ambient_out: espaços de saída, se F for retangular
    """
    ambient = list(ambient) if ambient is not None else list(F.factors)
    ambient_out = list(ambient_out) if ambient_out is not None else list(ambient)
    if len(slots) != len(F.factors):
        raise DomainError(f"{F.name} age em {len(F.factors)} fatores, recebidos slots {tuple(slots)}")
    for slot, space in zip(slots, F.factors):
        if ambient[slot].dim != space.dim:
            raise DomainError(f"Dimensão do slot {slot} difere do fator de {F.name}")
    return _shifted(lambda point: F(u, point), lam, F.step,
                    ambient, ambient_out, slots, shift_slot)


def shifted_morphism(f: DynamicalMorphism,
                     lam,
                     step: complex,
                     slot: int,
                     shift_slot: Optional[int],
                     ambient_in: Sequence[WeightedSpace]) -> np.ndarray:
    """Imersão de f(λ − γh^{(k)}) no slot indicado; o slot troca source por target"""
    ambient_out = list(ambient_in)
    ambient_out[slot] = f.target
    return _shifted(f, lam, step, ambient_in, ambient_out, [slot], shift_slot)


def off_weight_mass(A: np.ndarray,
                    V: WeightedSpace,
                    W: WeightedSpace,
                    W_out: Optional[WeightedSpace] = None,
                    tol: float = None) -> float:
    """
    Maior módulo de uma entrada de A que liga vetores com pesos diferentes
    no primeiro slot ou no segundo slot.
    """
    W_out = W if W_out is None else W_out
    tol = Config.WEIGHT_TOL if tol is None else tol
    A = np.asarray(A, dtype=complex)
    if A.shape != (V.dim * W_out.dim, V.dim * W.dim):
        raise DomainError(f"Matriz de forma {A.shape} incompatível com V⊗W")

    same_first = V.same_weight(tol)
    diff = W_out.weights[:, None, :] - W.weights[None, :, :]
    same_second = np.all(np.abs(diff) <= tol, axis=2)
    allowed = (same_first[:, None, :, None] & same_second[None, :, None, :]).reshape(A.shape)
    violating = np.abs(A[~allowed])
    return float(violating.max()) if violating.size else 0.0


def zero_weight_in_each_component(A: np.ndarray,
                                  V: WeightedSpace,
                                  W: WeightedSpace,
                                  tol: float = None,
                                  W_out: Optional[WeightedSpace] = None) -> bool:
    """True se A tem peso zero em cada componente de V⊗W (dentro de tol)"""
    tol = Config.WEIGHT_TOL if tol is None else tol
    return off_weight_mass(A, V, W, W_out) <= tol


def equivariance_defect(M: np.ndarray, source: WeightedSpace, target: WeightedSpace) -> float:
    """Maior módulo de uma entrada de M entre vetores de pesos diferentes"""
    diff = target.weights[:, None, :] - source.weights[None, :, :]
    allowed = np.all(np.abs(diff) <= Config.WEIGHT_TOL, axis=2)
    violating = np.abs(np.asarray(M)[~allowed])
    return float(violating.max()) if violating.size else 0.0


def is_equivariant(M: np.ndarray, source: WeightedSpace, target: WeightedSpace,
                   tol: float = None) -> bool:
    tol = Config.WEIGHT_TOL if tol is None else tol
    return equivariance_defect(M, source, target) <= tol


def solve_checked(A: np.ndarray, B: np.ndarray, limit: float = None) -> np.ndarray:
    """A^{-1}B com verificação do número de condição"""
    limit = Config.SINGULAR_CONDITION if limit is None else limit
    condition = np.linalg.cond(A)
    if not np.isfinite(condition) or condition > limit:
        raise SingularMatrixError(f"Matriz mal condicionada (cond={condition:.3e})")
    return np.linalg.solve(A, B)


def intertwiner_criterion_residual(A: np.ndarray,
                                   L_W: DynamicalOperator,
                                   L_U: DynamicalOperator,
                                   samples) -> float:
    """
    Massa fora de peso de L_U(u,λ)^{-1}(1⊗A)L_W(u,λ), máxima sobre as amostras.

    Args:
        A: matriz W → U
        L_W, L_U: operadores L sobre V⊗W e V⊗U com o mesmo espaço auxiliar V
        samples: amostras com atributos u (tupla) e lam
    """
    V, W = L_W.factors
    U = L_U.factors[1]
    if L_U.factors[0].dim != V.dim:
        raise DomainError("Os operadores L precisam compartilhar o espaço auxiliar")
    lifted = embed(np.asarray(A, dtype=complex), [V.dim, W.dim], [V.dim, U.dim], [1])

    worst = 0.0
    for sample in samples:
        u = sample.u[0]
        conjugated = solve_checked(L_U(u, sample.lam), lifted @ L_W(u, sample.lam))
        worst = max(worst, off_weight_mass(conjugated, V, W, U))
    return worst


def max_entry_norm(M: np.ndarray) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0
