"""
Séries de potências truncadas com coeficientes escalares, vetoriais ou matriciais.

Uma série de ordem N guarda os coeficientes c₀ … c_N num único array
de forma (N+1, *value_shape). O produto de coeficientes é matricial quando
o da esquerda é uma matriz e elemento a elemento nos demais casos; a ordem
de um resultado é a menor ordem entre os operandos.

    >>> z = MatrixPowerSeries.variable(4)
    >>> (1 + z) * (1 - z)          # 1 − z²
    >>> (1 + z).reciprocal()       # Σ (−z)^k
"""

import logging
from typing import Callable, Tuple

import numpy as np

from config.settings import Config
from src.errors import DomainError, SingularMatrixError

logger = logging.getLogger(__name__)


def _coefficient_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.ndim == 2 and b.ndim in (1, 2):
        if a.shape[1] != b.shape[0]:
            raise DomainError(f"Dimensões incompatíveis no produto: {a.shape} e {b.shape}")
        return a @ b
    try:
        return a * b
    except ValueError as e:
        raise DomainError(f"Dimensões incompatíveis no produto: {a.shape} e {b.shape}") from e


class MatrixPowerSeries:
    """
    Série de potências truncada Σ_{k≤N} c_k z^k.

    Args:
        coeffs: sequência de coeficientes c₀, c₁, … (todos com a mesma forma)
        order: ordem N; completa com zeros ou trunca se dada
    """

    def __init__(self, coeffs, order: int = None):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 0:
            c = c.reshape(1)
        if order is not None:
            if order < 0:
                raise DomainError(f"Ordem deve ser ≥ 0, recebido {order}")
            if len(c) > order + 1:
                c = c[:order + 1]
            elif len(c) < order + 1:
                padding = np.zeros((order + 1 - len(c),) + c.shape[1:], dtype=complex)
                c = np.concatenate([c, padding])
        self.c = c

    # ============= CONSTRUTORES =============

    @classmethod
    def zeros(cls, order: int, shape: Tuple[int, ...] = ()) -> 'MatrixPowerSeries':
        return cls(np.zeros((order + 1,) + tuple(shape), dtype=complex))

    @classmethod
    def constant(cls, value, order: int) -> 'MatrixPowerSeries':
        value = np.asarray(value, dtype=complex)
        series = cls.zeros(order, value.shape)
        series.c[0] = value
        return series

    @classmethod
    def variable(cls, order: int) -> 'MatrixPowerSeries':
        """A série z"""
        series = cls.zeros(order)
        if order >= 1:
            series.c[1] = 1
        return series

    # ============= PROPRIEDADES =============

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @property
    def value_shape(self) -> Tuple[int, ...]:
        return self.c.shape[1:]

    @property
    def coefficients(self) -> np.ndarray:
        return self.c.copy()

    def __getitem__(self, k):
        return self.c[k]

    def __len__(self):
        return len(self.c)

    def __repr__(self):
        return f"MatrixPowerSeries(order={self.order}, shape={self.value_shape})"

    def truncate(self, order: int) -> 'MatrixPowerSeries':
        return MatrixPowerSeries(self.c, order=order)

    def copy(self) -> 'MatrixPowerSeries':
        return MatrixPowerSeries(self.c.copy())

    def norms(self) -> np.ndarray:
        """Norma de Frobenius de cada coeficiente"""
        return np.array([np.linalg.norm(np.atleast_1d(ck)) for ck in self.c])

    # ============= ARITMÉTICA =============

    def _coerce(self, other) -> 'MatrixPowerSeries':
        if isinstance(other, MatrixPowerSeries):
            return other
        return MatrixPowerSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        try:
            return MatrixPowerSeries(self.c[:order + 1] + other.c[:order + 1])
        except ValueError as e:
            raise DomainError(f"Formas incompatíveis na soma: {self.value_shape} e {other.value_shape}") from e

    __radd__ = __add__

    def __neg__(self):
        return MatrixPowerSeries(-self.c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MatrixPowerSeries):
            other = np.asarray(other, dtype=complex)
            if other.ndim == 0:
                return MatrixPowerSeries(self.c * other)
            other = MatrixPowerSeries.constant(other, self.order)
        order = min(self.order, other.order)
        first = _coefficient_product(self.c[0], other.c[0])
        result = np.zeros((order + 1,) + first.shape, dtype=complex)
        for k in range(order + 1):
            for i in range(k + 1):
                result[k] += _coefficient_product(self.c[i], other.c[k - i])
        return MatrixPowerSeries(result)

    def __rmul__(self, other):
        other = np.asarray(other, dtype=complex)
        if other.ndim == 0:
            return MatrixPowerSeries(self.c * other)
        return MatrixPowerSeries.constant(other, self.order) * self

    def __truediv__(self, other):
        if isinstance(other, MatrixPowerSeries):
            return self * other.reciprocal()
        return MatrixPowerSeries(self.c / complex(other))

    def reciprocal(self) -> 'MatrixPowerSeries':
        """Inversa formal: exige termo constante invertível"""
        a0 = self.c[0]
        if a0.ndim == 0:
            if abs(a0) < 1 / Config.SINGULAR_CONDITION:
                raise SingularMatrixError(f"Termo constante {a0} não invertível")
            h0 = 1 / a0
        elif a0.ndim == 2 and a0.shape[0] == a0.shape[1]:
            if np.linalg.cond(a0) > Config.SINGULAR_CONDITION:
                raise SingularMatrixError("Termo constante matricial não invertível")
            h0 = np.linalg.inv(a0)
        else:
            raise DomainError(f"Inversão exige coeficientes escalares ou quadrados, recebido {a0.shape}")

        h = np.zeros_like(self.c)
        h[0] = h0
        for k in range(1, self.order + 1):
            acc = np.zeros_like(a0)
            for i in range(1, k + 1):
                acc = acc + _coefficient_product(self.c[i], h[k - i])
            h[k] = -_coefficient_product(np.asarray(h0), acc)
        return MatrixPowerSeries(h)

    def __call__(self, inner: 'MatrixPowerSeries', polynomial: bool = False) -> 'MatrixPowerSeries':
        return compose(self, inner, polynomial=polynomial)

    # ============= TRANSFORMAÇÕES =============

    def scale_argument(self, factor: complex) -> 'MatrixPowerSeries':
        """f(z) ↦ f(factor·z)"""
        powers = complex(factor) ** np.arange(self.order + 1)
        return MatrixPowerSeries(self.c * powers.reshape((-1,) + (1,) * len(self.value_shape)))

    def map_coefficients(self, fn: Callable[[np.ndarray], np.ndarray]) -> 'MatrixPowerSeries':
        """Aplica uma função linear a cada coeficiente"""
        return MatrixPowerSeries(np.array([fn(ck) for ck in self.c]))

    def entry(self, index) -> 'MatrixPowerSeries':
        """Série escalar de uma entrada"""
        return MatrixPowerSeries(self.c[(slice(None),) + tuple(np.atleast_1d(index))])

    def restrict(self, mask: np.ndarray) -> 'MatrixPowerSeries':
        """Série vetorial das entradas selecionadas pela máscara"""
        return MatrixPowerSeries(self.c[:, mask])

    @classmethod
    def from_support(cls, vector: 'MatrixPowerSeries', mask: np.ndarray) -> 'MatrixPowerSeries':
        """Inverso de restrict: zeros fora da máscara"""
        full = np.zeros((vector.order + 1,) + mask.shape, dtype=complex)
        full[:, mask] = vector.c
        return cls(full)


# ============= API FUNCIONAL =============


def add(a: MatrixPowerSeries, b: MatrixPowerSeries) -> MatrixPowerSeries:
    return a + b


def multiply(a: MatrixPowerSeries, b: MatrixPowerSeries) -> MatrixPowerSeries:
    return a * b


def invert(a: MatrixPowerSeries) -> MatrixPowerSeries:
    return a.reciprocal()


def compose(outer: MatrixPowerSeries, inner: MatrixPowerSeries,
            polynomial: bool = False) -> MatrixPowerSeries:
    """
    outer(inner) pelo esquema de Horner; inner deve ser escalar.

    Como série truncada exige inner₀ = 0 e devolve ordem min(N_outer, N_inner).
    Com polynomial=True, outer é tratado como polinômio exato e o
    resultado tem a ordem de inner, qualquer que seja inner₀.
    """
    if inner.value_shape != ():
        raise DomainError("A série interna da composição deve ser escalar")
    if polynomial:
        order = inner.order
    else:
        if abs(inner[0]) > 0:
            raise DomainError("Composição truncada exige termo constante nulo na série interna")
        order = min(outer.order, inner.order)
    inner = inner.truncate(order)

    result = MatrixPowerSeries.constant(outer[outer.order], order)
    for k in range(outer.order - 1, -1, -1):
        result = result * inner + MatrixPowerSeries.constant(outer[k], order)
    return result


# ============= JSON =============


def to_pairs(values) -> list:
    """Array complexo → listas aninhadas de pares [re, im]"""
    values = np.asarray(values, dtype=complex)
    return np.stack([values.real, values.imag], axis=-1).tolist()


def from_pairs(pairs) -> np.ndarray:
    """Listas aninhadas de pares [re, im] → array complexo"""
    array = np.asarray(pairs, dtype=float)
    if array.shape[-1:] != (2,):
        raise DomainError("Números complexos devem ser pares [re, im]")
    return array[..., 0] + 1j * array[..., 1]


def series_to_json(series: MatrixPowerSeries) -> dict:
    return {
        'order': series.order,
        'shape': list(series.value_shape),
        'coefficients': to_pairs(series.c),
    }


def series_from_json(payload: dict) -> MatrixPowerSeries:
    try:
        coefficients = from_pairs(payload['coefficients'])
    except KeyError as e:
        raise DomainError("Série sem o campo 'coefficients'") from e
    shape = tuple(payload.get('shape', coefficients.shape[1:]))
    coefficients = coefficients.reshape((-1,) + shape)
    return MatrixPowerSeries(coefficients, order=payload.get('order'))
