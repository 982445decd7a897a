"""
Resíduos da equação de Yang-Baxter dinâmica, da relação de representação
e da relação de morfismo; construtores de representações e o produto ⊙.

Convenção de slots: V (auxiliar) = 0, W = 1, U = 2.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

import numpy as np

from src.errors import DomainError
from src.sampling import Sample
from src.weight_core import (DynamicalMorphism, DynamicalOperator, WeightedSpace,
                             embed, max_entry_norm, shifted_eval, shifted_morphism,
                             solve_checked)

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Representation:
    """Par (W, L_W) com L_W operador dinâmico sobre V⊗W"""
    space: WeightedSpace
    L: DynamicalOperator
    name: str = 'rep'

    def __post_init__(self):
        if len(self.L.factors) != 2 or self.L.factors[1].dim != self.space.dim:
            raise DomainError(f"L de {self.name} deve agir em V⊗W com dim W = {self.space.dim}")

    @property
    def auxiliary(self) -> WeightedSpace:
        return self.L.factors[0]

    @property
    def step(self) -> complex:
        return self.L.step


def _check_rmatrix(R: DynamicalOperator) -> WeightedSpace:
    if len(R.factors) != 2 or R.factors[0].dim != R.factors[1].dim:
        raise DomainError(f"{R.name} deve agir em V⊗V")
    return R.factors[0]


def qdybe_sides(R: DynamicalOperator, u1: complex, u2: complex, u3: complex,
                lam) -> Tuple[np.ndarray, np.ndarray]:
    """Lados esquerdo e direito da equação de Yang-Baxter dinâmica em V⊗V⊗V"""
    V = _check_rmatrix(R)
    ambient = (V, V, V)
    lhs = (shifted_eval(R, u1 - u2, lam, (0, 1), 2, ambient)
           @ shifted_eval(R, u1 - u3, lam, (0, 2), None, ambient)
           @ shifted_eval(R, u2 - u3, lam, (1, 2), 0, ambient))
    rhs = (shifted_eval(R, u2 - u3, lam, (1, 2), None, ambient)
           @ shifted_eval(R, u1 - u3, lam, (0, 2), 1, ambient)
           @ shifted_eval(R, u1 - u2, lam, (0, 1), None, ambient))
    return lhs, rhs


def _max_over(samples: Iterable[Sample], residual: Callable[[Sample], float]) -> float:
    worst = 0.0
    for sample in samples:
        worst = max(worst, residual(sample))
    return worst


def qdybe_residual(R: DynamicalOperator, samples) -> float:
    """Máximo, sobre as amostras, da norma max-entrada de LHS − RHS"""
    def residual(sample):
        lhs, rhs = qdybe_sides(R, *sample.u[:3], sample.lam)
        return max_entry_norm(lhs - rhs)
    return _max_over(samples, residual)


def rep_sides(rep: Representation, R: DynamicalOperator, u1, u2, u3, lam):
    V = _check_rmatrix(R)
    if rep.auxiliary.dim != V.dim:
        raise DomainError("Espaço auxiliar da representação difere do de R")
    L = rep.L
    ambient = (V, V, rep.space)
    lhs = (shifted_eval(R, u1 - u2, lam, (0, 1), 2, ambient)
           @ shifted_eval(L, u1 - u3, lam, (0, 2), None, ambient)
           @ shifted_eval(L, u2 - u3, lam, (1, 2), 0, ambient))
    rhs = (shifted_eval(L, u2 - u3, lam, (1, 2), None, ambient)
           @ shifted_eval(L, u1 - u3, lam, (0, 2), 1, ambient)
           @ shifted_eval(R, u1 - u2, lam, (0, 1), None, ambient))
    return lhs, rhs


def rep_residual(rep: Representation, R: DynamicalOperator, samples) -> float:
    def residual(sample):
        lhs, rhs = rep_sides(rep, R, *sample.u[:3], sample.lam)
        return max_entry_norm(lhs - rhs)
    return _max_over(samples, residual)


def morphism_sides(f: DynamicalMorphism, src: Representation, dst: Representation, u, lam):
    """(1⊗f(λ))L_W(u,λ) e L_U(u,λ)(1⊗f(λ−γh^{(1)}))"""
    V = src.auxiliary
    if dst.auxiliary.dim != V.dim or dst.step != src.step:
        raise DomainError("Representações com espaço auxiliar ou passo diferentes")
    lifted = embed(f(lam), [V.dim, f.source.dim], [V.dim, f.target.dim], [1])
    lhs = lifted @ src.L(u, lam)
    rhs = dst.L(u, lam) @ shifted_morphism(f, lam, src.step, 1, 0, (V, src.space))
    return lhs, rhs


def morphism_residual(f: DynamicalMorphism, src: Representation, dst: Representation,
                      samples) -> float:
    def residual(sample):
        lhs, rhs = morphism_sides(f, src, dst, sample.u[0], sample.lam)
        return max_entry_norm(lhs - rhs)
    return _max_over(samples, residual)


def trivial_rep(W: WeightedSpace, aux: WeightedSpace, gamma: complex) -> Representation:
    """(W, 1): exige W com ação nula de 𝔞"""
    if not W.is_zero_weight():
        raise DomainError("A representação trivial exige todos os pesos de W nulos")
    return Representation(W, DynamicalOperator.identity((aux, W), gamma), name='trivial')


def basic_rep(R: DynamicalOperator) -> Representation:
    """(V, R)"""
    V = _check_rmatrix(R)
    return Representation(V, R, name=f"basic({R.name})")


def twist_rep(rep: Representation, f: Callable[[np.ndarray], np.ndarray]) -> Representation:
    """L^f(u,λ) = (1⊗f(λ))^{-1} L(u,λ) (1⊗f(λ−γh^{(1)}))"""
    V, W = rep.auxiliary, rep.space
    morphism = f if isinstance(f, DynamicalMorphism) else DynamicalMorphism(f, W, W, name='twist')

    def evaluate(u, lam):
        lifted = embed(morphism(lam), [V.dim, W.dim], [V.dim, W.dim], [1])
        shifted = shifted_morphism(morphism, lam, rep.step, 1, 0, (V, W))
        return solve_checked(lifted, rep.L(u, lam) @ shifted)

    L = DynamicalOperator(evaluate, (V, W), rep.step, name=f"{rep.L.name}^f")
    return Representation(W, L, name=f"{rep.name}^f")


def tensor_reps(a: Representation, b: Representation) -> Representation:
    """L_{W⊙U}(u,λ) = L_W^{12}(u, λ−γh^{(3)}) L_U^{13}(u, λ)"""
    V = a.auxiliary
    if b.auxiliary.dim != V.dim or a.step != b.step:
        raise DomainError("⊙ exige espaço auxiliar e passo comuns")
    W, U = a.space, b.space
    ambient = (V, W, U)

    def evaluate(u, lam):
        return (shifted_eval(a.L, u, lam, (0, 1), 2, ambient)
                @ shifted_eval(b.L, u, lam, (0, 2), None, ambient))

    space = W.tensor(U)
    L = DynamicalOperator(evaluate, (V, space), a.step, name=f"({a.L.name}⊙{b.L.name})")
    return Representation(space, L, name=f"({a.name}⊙{b.name})")


def tensor_morphisms(f: DynamicalMorphism, g: DynamicalMorphism, gamma: complex) -> DynamicalMorphism:
    """(f⊙g)(λ) = f(λ−γh^{(2)}) ⊗ g(λ), slot 2 = espaço de partida de g"""
    source = f.source.tensor(g.source)
    target = f.target.tensor(g.target)

    def evaluate(lam):
        first = shifted_morphism(f, lam, gamma, 0, 1, (f.source, g.source))
        second = embed(g(lam), [f.target.dim, g.source.dim], [f.target.dim, g.target.dim], [1])
        return second @ first

    return DynamicalMorphism(evaluate, source, target, name=f"({f.name}⊙{g.name})")


def identity_morphism(W: WeightedSpace) -> DynamicalMorphism:
    return DynamicalMorphism.identity(W)


def compose_morphisms(g: DynamicalMorphism, f: DynamicalMorphism) -> DynamicalMorphism:
    """g∘f"""
    if f.target.dim != g.source.dim:
        raise DomainError("Morfismos não componíveis")
    return DynamicalMorphism(lambda lam: g(lam) @ f(lam), f.source, g.target,
                             name=f"{g.name}∘{f.name}")


def rep_condition(rep: Representation, samples) -> float:
    """Maior número de condição de L(u,λ) nas amostras"""
    worst = 0.0
    for sample in samples:
        worst = max(worst, float(np.linalg.cond(rep.L(sample.u[0], sample.lam))))
    return worst
