"""
Exceções do verificador de R-matrizes dinâmicas.

Todas derivam de DynamicalError e também da exceção padrão mais próxima,
para que `except ValueError` e afins continuem funcionando.
"""

import numpy as np


class DynamicalError(Exception):
    """Raiz das exceções do projeto"""


class DomainError(DynamicalError, ValueError):
    """Parâmetro fora do domínio (Im τ ≤ 0, |p| ≥ 1, pesos inválidos...)"""


class PoleError(DynamicalError, ZeroDivisionError):
    """Avaliação sobre (ou perto de) uma singularidade declarada"""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvergenceError(DynamicalError, ArithmeticError):
    """Limite de termos atingido antes do critério de truncamento"""


class SingularMatrixError(DynamicalError, np.linalg.LinAlgError):
    """Matriz não invertível dentro da tolerância de condicionamento"""


class ResonanceError(DynamicalError, ArithmeticError):
    """p^k próximo demais de um autovalor da parte linear"""

    def __init__(self, message, order=None, resolvent_norm=None):
        super().__init__(message)
        self.order = order
        self.resolvent_norm = resolvent_norm
