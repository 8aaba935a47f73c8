#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Homogeneous dilations
- Dilation: 降順重み q_i = 1+(n-i)μ / 昇順重み p_i = 1+(i-1)ν
- dilation_matrix: D(λ) = diag(λ^{w_i})
- varrho: ϱ(V) = ln((V+e-1)/V)
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from common.types import ContractViolationError, DomainError

E_MINUS_ONE = math.e - 1.0
LN_E_MINUS_ONE = math.log(E_MINUS_ONE)


class DilationKind(str, Enum):
    DESCENDING = "Descending"
    ASCENDING = "Ascending"


@dataclass(frozen=True)
class Dilation:
    """重み付き一様拡大"""
    kind: DilationKind
    parameter: float
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ContractViolationError(f"次元 n は1以上が必要です: {self.n}")
        if self.kind == DilationKind.DESCENDING and not 0.0 < self.parameter <= 1.0:
            raise ContractViolationError(f"μ は (0, 1] が必要です: {self.parameter}")
        if self.kind == DilationKind.ASCENDING and not self.parameter > 0.0:
            raise ContractViolationError(f"ν は正の値が必要です: {self.parameter}")

    @classmethod
    def descending(cls, mu: float, n: int) -> 'Dilation':
        return cls(DilationKind.DESCENDING, float(mu), n)

    @classmethod
    def ascending(cls, nu: float, n: int) -> 'Dilation':
        return cls(DilationKind.ASCENDING, float(nu), n)

    @property
    def exponents(self) -> np.ndarray:
        i = np.arange(1, self.n + 1, dtype=float)
        if self.kind == DilationKind.DESCENDING:
            return 1.0 + (self.n - i) * self.parameter
        return 1.0 + (i - 1.0) * self.parameter

    @property
    def generator(self) -> np.ndarray:
        """H = diag(w_i)"""
        return np.diag(self.exponents)

    def scale(self, lam: float, x: np.ndarray) -> np.ndarray:
        """D(λ)x（行列を作らずに計算）"""
        if not lam > 0:
            raise DomainError(f"λ は正の値が必要です: {lam}")
        with np.errstate(over='ignore', invalid='ignore'):
            weights = lam ** self.exponents
            return np.where(x == 0.0, 0.0, weights * x)


def dilation_matrix(d: Dilation, lam: float) -> np.ndarray:
    """D(λ) = diag(λ^{w_i})"""
    if not lam > 0:
        raise DomainError(f"λ は正の値が必要です: {lam}")
    with np.errstate(over='ignore'):
        return np.diag(lam ** d.exponents)


def varrho(V: float) -> float:
    """ϱ(V) = ln((V+e-1)/V)、ϱ(1) = 1"""
    if not V > 0:
        raise DomainError(f"V は正の値が必要です: {V}")
    if V == 1.0:
        return 1.0
    return math.log1p(E_MINUS_ONE / V)


def varrho_derivative(V: float) -> float:
    """dϱ/dV = -(e-1)/(V(V+e-1))"""
    if not V > 0:
        raise DomainError(f"V は正の値が必要です: {V}")
    return -E_MINUS_ONE / (V * (V + E_MINUS_ONE))
