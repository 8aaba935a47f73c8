#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ILF control laws
- ControllerSpec: ゲイン (P, K, μ, ν)・制御則の種類・サンプリング方針
- u_finite_time: V^{1−μ} K D(V⁻¹) x
- u_hyper:       ϱ^{μ−1}(V) K D(ϱ(V)) x または K D(ϱ(V)) x（xᵀPx < 1）/ Kx（xᵀPx ≥ 1）
- u_combined:    K D(ϱ(V)) x（xᵀPx < 1）/ V^{1+ν} K D̄(V⁻¹) x（xᵀPx ≥ 1）

Q1(V,x) = 0 ⇔ 有限時間 ILF の Q(1/ϱ(V), x) = 0 なので、HyperLaw.PREFACTORED の内側は
u_finite_time(1/ϱ(V), x) と同じ値になる。HyperLaw.PLAIN の内側はこれに ϱ^{1−μ}(V) を掛けたもの。
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from common.types import ContractViolationError
from ..lyapunov.candidates import IlfCandidate
from ..lyapunov.dilation import varrho
from ..lyapunov.solver import DEFAULT_PRECISION, DEFAULT_V_MIN


class ControllerVariant(str, Enum):
    FINITE_TIME = "FiniteTimeIlf"
    HYPER = "HyperIlf"
    COMBINED = "CombinedNearlyFixed"
    LINEAR = "LinearOnly"


class HyperLaw(str, Enum):
    """超指数制御の内側の式"""
    PREFACTORED = "prefactored"  # ϱ^{μ−1}(V) K D(ϱ(V)) x
    PLAIN = "plain"              # K D(ϱ(V)) x


class Branch(str, Enum):
    INNER = "inner"
    OUTER = "outer"
    LINEAR = "linear"
    ORIGIN = "origin"


@dataclass(frozen=True)
class Sampling:
    """period=None は連続（積分ステップ毎に解く）"""
    period: Optional[float] = None

    def __post_init__(self):
        if self.period is not None and not self.period > 0:
            raise ContractViolationError(f"サンプリング周期は正の値が必要です: {self.period}")

    @classmethod
    def continuous(cls) -> 'Sampling':
        return cls(None)

    @classmethod
    def sampled(cls, period: float) -> 'Sampling':
        return cls(float(period))

    @property
    def is_continuous(self) -> bool:
        return self.period is None

    def describe(self) -> str:
        return "Continuous" if self.is_continuous else f"Sampled({self.period:g})"


@dataclass(frozen=True)
class ControllerSpec:
    """制御器の仕様（ゲインデータ・制御則・サンプリング・ソルバー設定）"""
    variant: ControllerVariant
    P: np.ndarray
    K: np.ndarray
    mu: float
    nu: Optional[float] = None
    sampling: Sampling = field(default_factory=Sampling.continuous)
    v_min: float = DEFAULT_V_MIN
    bisect_precision: float = DEFAULT_PRECISION
    hyper_law: HyperLaw = HyperLaw.PREFACTORED

    def __post_init__(self):
        object.__setattr__(self, 'variant', ControllerVariant(self.variant))
        try:
            object.__setattr__(self, 'hyper_law', HyperLaw(self.hyper_law))
        except ValueError:
            raise ContractViolationError(f"未知の超指数制御則: {self.hyper_law!r}")
        P = np.asarray(self.P, dtype=float)
        K = np.asarray(self.K, dtype=float).reshape(-1)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or K.size != P.shape[0]:
            raise ContractViolationError(f"次元不一致: P={P.shape}, K={K.shape}")
        object.__setattr__(self, 'P', P)
        object.__setattr__(self, 'K', K)
        if not (self.v_min > 0 and self.bisect_precision > 0):
            raise ContractViolationError("v_min と bisect_precision は正の値が必要です")
        if self.variant == ControllerVariant.COMBINED and (self.nu is None or not self.nu > 0):
            raise ContractViolationError(f"CombinedNearlyFixed には正の ν が必要です: {self.nu}")
        # ILF 候補が構築できることを確認（P の正定値性・μ の範囲）
        object.__setattr__(self, '_inner', self._build_inner())
        object.__setattr__(self, '_outer', self._build_outer())

    def _build_inner(self) -> IlfCandidate:
        if self.variant == ControllerVariant.FINITE_TIME:
            return IlfCandidate.finite_time(self.P, self.mu)
        if self.variant == ControllerVariant.LINEAR:
            return IlfCandidate.quadratic(self.P)
        return IlfCandidate.hyper(self.P, self.mu)

    def _build_outer(self) -> Optional[IlfCandidate]:
        if self.variant == ControllerVariant.COMBINED:
            return IlfCandidate.nearly_fixed(self.P, self.nu)
        return None

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @property
    def inner_candidate(self) -> IlfCandidate:
        return self._inner

    @property
    def outer_candidate(self) -> Optional[IlfCandidate]:
        return self._outer

    def energy(self, x: np.ndarray) -> float:
        """xᵀPx"""
        return float(x @ self.P @ x)


@dataclass(frozen=True)
class ControlValue:
    """制御入力とテレメトリ（alternate は内側でもう一方の式を使った場合の値）"""
    u: float
    clamped: bool
    branch: Branch
    alternate: Optional[float] = None


def _clamp(spec: ControllerSpec, V: float):
    if V < spec.v_min:
        return spec.v_min, True
    return float(V), False


def _state(spec: ControllerSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != spec.n:
        raise ContractViolationError(f"状態次元 {x.size} と P の次元 {spec.n} が不一致です")
    return x


def u_linear(spec: ControllerSpec, x) -> ControlValue:
    return ControlValue(float(spec.K @ _state(spec, x)), False, Branch.LINEAR)


def u_finite_time(spec: ControllerSpec, V: float, x) -> ControlValue:
    """u = V^{1−μ} K D(V⁻¹) x"""
    x = _state(spec, x)
    V, clamped = _clamp(spec, V)
    y = spec.inner_candidate.dilation.scale(1.0 / V, x)
    return ControlValue(V ** (1.0 - spec.mu) * float(spec.K @ y), clamped, Branch.INNER)


def _hyper_inner(spec: ControllerSpec, V: float, x: np.ndarray, prefactor: bool) -> float:
    r = varrho(V)
    y = spec.inner_candidate.dilation.scale(r, x)
    u = float(spec.K @ y)
    return r ** (spec.mu - 1.0) * u if prefactor else u


def u_hyper(spec: ControllerSpec, V: float, x) -> ControlValue:
    """内側は spec.hyper_law の式、外側 Kx（V は使わない）"""
    x = _state(spec, x)
    if spec.energy(x) >= 1.0:
        return ControlValue(float(spec.K @ x), False, Branch.OUTER)
    V, clamped = _clamp(spec, V)
    prefactor = spec.hyper_law == HyperLaw.PREFACTORED
    return ControlValue(
        _hyper_inner(spec, V, x, prefactor=prefactor),
        clamped,
        Branch.INNER,
        alternate=_hyper_inner(spec, V, x, prefactor=not prefactor),
    )


def u_combined(spec: ControllerSpec, V: float, x) -> ControlValue:
    """内側 K D(ϱ(V)) x、外側 V^{1+ν} K D̄(V⁻¹) x"""
    if spec.outer_candidate is None:
        raise ContractViolationError("u_combined には CombinedNearlyFixed の仕様が必要です")
    x = _state(spec, x)
    V, clamped = _clamp(spec, V)
    if spec.energy(x) >= 1.0:
        y = spec.outer_candidate.dilation.scale(1.0 / V, x)
        return ControlValue(V ** (1.0 + spec.nu) * float(spec.K @ y), clamped, Branch.OUTER)
    return ControlValue(
        _hyper_inner(spec, V, x, prefactor=False),
        clamped,
        Branch.INNER,
        alternate=_hyper_inner(spec, V, x, prefactor=True),
    )


def control_law(spec: ControllerSpec, V: float, x) -> ControlValue:
    """制御則の種類に応じた u(V, x)"""
    if spec.variant == ControllerVariant.FINITE_TIME:
        return u_finite_time(spec, V, x)
    if spec.variant == ControllerVariant.HYPER:
        return u_hyper(spec, V, x)
    if spec.variant == ControllerVariant.COMBINED:
        return u_combined(spec, V, x)
    return u_linear(spec, x)
