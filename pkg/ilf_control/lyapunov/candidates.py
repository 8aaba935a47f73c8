#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
IlfCandidate - 陰的リアプノフ関数 Q(V,x) の4系統
- FiniteTimeQ:      xᵀD(V⁻¹)PD(V⁻¹)x − 1      （降順拡大）
- HyperQ1:          xᵀD(ϱ(V))PD(ϱ(V))x − 1    （降順拡大）
- QuadraticQ2:      xᵀPx / V² − 1
- NearlyFixedQ2bar: xᵀD̄(V⁻¹)PD̄(V⁻¹)x − 1     （昇順拡大）

Q の V 微分は中心差分と閉形式の2経路で計算できる。
"""

from enum import Enum
from typing import Optional

import numpy as np

from common.types import ContractViolationError, DomainError
from ..lmi.eigen import sym_eigs
from .dilation import Dilation, DilationKind, varrho, varrho_derivative

FD_RELATIVE_STEP = 1e-6


class IlfVariant(str, Enum):
    FINITE_TIME_Q = "FiniteTimeQ"
    HYPER_Q1 = "HyperQ1"
    QUADRATIC_Q2 = "QuadraticQ2"
    NEARLY_FIXED_Q2BAR = "NearlyFixedQ2bar"


_REQUIRED_KIND = {
    IlfVariant.FINITE_TIME_Q: DilationKind.DESCENDING,
    IlfVariant.HYPER_Q1: DilationKind.DESCENDING,
    IlfVariant.NEARLY_FIXED_Q2BAR: DilationKind.ASCENDING,
}


class IlfCandidate:
    """陰的リアプノフ関数の候補（形状行列 P と拡大）"""

    def __init__(self, variant: IlfVariant, P: np.ndarray, dilation: Optional[Dilation] = None):
        self.variant = IlfVariant(variant)
        P = np.array(P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ContractViolationError(f"P は正方行列が必要です: shape={P.shape}")
        try:
            eigenvalues = sym_eigs(P)
        except DomainError as e:
            raise ContractViolationError(f"P が対称ではありません: {e}")
        if eigenvalues[0] <= 0:
            raise ContractViolationError(f"P が正定値ではありません: λ_min={eigenvalues[0]:.6g}")
        self.P = 0.5 * (P + P.T)
        self.eigenvalues = eigenvalues

        if self.variant == IlfVariant.QUADRATIC_Q2:
            dilation = None
        else:
            required = _REQUIRED_KIND[self.variant]
            if dilation is None or dilation.kind != required:
                raise ContractViolationError(
                    f"{self.variant.value} には {required.value} 拡大が必要です"
                )
            if dilation.n != self.n:
                raise ContractViolationError(f"拡大の次元 {dilation.n} と P の次元 {self.n} が不一致です")
        self.dilation = dilation

        self._w = dilation.exponents if dilation is not None else np.ones(self.n)
        H = np.diag(self._w)
        self._PH = self.P @ H + H @ self.P

    # ---- factories -------------------------------------------------------

    @classmethod
    def finite_time(cls, P: np.ndarray, mu: float) -> 'IlfCandidate':
        return cls(IlfVariant.FINITE_TIME_Q, P, Dilation.descending(mu, np.shape(P)[0]))

    @classmethod
    def hyper(cls, P: np.ndarray, mu: float) -> 'IlfCandidate':
        return cls(IlfVariant.HYPER_Q1, P, Dilation.descending(mu, np.shape(P)[0]))

    @classmethod
    def quadratic(cls, P: np.ndarray) -> 'IlfCandidate':
        return cls(IlfVariant.QUADRATIC_Q2, P)

    @classmethod
    def nearly_fixed(cls, P: np.ndarray, nu: float) -> 'IlfCandidate':
        return cls(IlfVariant.NEARLY_FIXED_Q2BAR, P, Dilation.ascending(nu, np.shape(P)[0]))

    # ---- evaluation ------------------------------------------------------

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def as_state(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.n:
            raise ContractViolationError(f"状態次元 {x.size} と P の次元 {self.n} が不一致です")
        return x

    def weights(self, V: float) -> np.ndarray:
        """y = weights(V) ⊙ x となる対角スケール"""
        if not V > 0:
            raise DomainError(f"V は正の値が必要です: {V}")
        if self.variant == IlfVariant.HYPER_Q1:
            return varrho(V) ** self._w
        if self.variant == IlfVariant.QUADRATIC_Q2:
            return np.full(self.n, 1.0 / V)
        return (1.0 / V) ** self._w

    def scaled_state(self, V: float, x) -> np.ndarray:
        x = self.as_state(x)
        y = self.weights(V) * x
        if np.isnan(y).any():
            # inf·0 は 0 とみなす
            y = np.where(x == 0.0, 0.0, y)
        return y

    def evaluate(self, V: float, x) -> float:
        y = self.scaled_state(V, x)
        value = float(y.dot(self.P.dot(y))) - 1.0
        if value != value:
            # 重みの発散で inf − inf になった場合は正の無限大
            return float('inf')
        return value

    def dq_dv_numeric(self, V: float, x, rel_step: float = FD_RELATIVE_STEP) -> float:
        h = rel_step * V
        return (self.evaluate(V + h, x) - self.evaluate(V - h, x)) / (2.0 * h)

    def dq_dv_analytic(self, V: float, x) -> float:
        y = self.scaled_state(V, x)
        if self.variant == IlfVariant.QUADRATIC_Q2:
            return -2.0 * float(y @ self.P @ y) / V
        quad = float(y @ self._PH @ y)
        if self.variant == IlfVariant.HYPER_Q1:
            return varrho_derivative(V) / varrho(V) * quad
        return -quad / V

    def dq_dx_numeric(self, V: float, x, rel_step: float = FD_RELATIVE_STEP) -> np.ndarray:
        x = self.as_state(x)
        h = rel_step * max(float(np.linalg.norm(x)), np.finfo(float).tiny)
        grad = np.empty(self.n)
        for i in range(self.n):
            step = np.zeros(self.n)
            step[i] = h
            grad[i] = (self.evaluate(V, x + step) - self.evaluate(V, x - step)) / (2.0 * h)
        return grad

    def dq_dx_analytic(self, V: float, x) -> np.ndarray:
        w = self.weights(V)
        return 2.0 * w * (self.P @ (w * self.as_state(x)))

    def __repr__(self) -> str:
        param = f", {self.dilation.kind.value}({self.dilation.parameter:g})" if self.dilation else ""
        return f"IlfCandidate({self.variant.value}, n={self.n}{param})"


def q_eval(c: IlfCandidate, V: float, x) -> float:
    """Q(V, x)"""
    return c.evaluate(V, x)


def dq_dv(c: IlfCandidate, V: float, x, method: str = 'numeric') -> float:
    """∂Q/∂V（'numeric': 中心差分, 'analytic': 閉形式）"""
    if method == 'analytic':
        return c.dq_dv_analytic(V, x)
    if method == 'numeric':
        return c.dq_dv_numeric(V, x)
    raise ContractViolationError(f"未知の微分方法: {method}")


def dq_dx(c: IlfCandidate, V: float, x, method: str = 'numeric') -> np.ndarray:
    """∂Q/∂x"""
    if method == 'analytic':
        return c.dq_dx_analytic(V, x)
    if method == 'numeric':
        return c.dq_dx_numeric(V, x)
    raise ContractViolationError(f"未知の微分方法: {method}")
