#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
LMI feasibility verification
- GainCertificate: (X, Y, P, K, μ, γ or a) の組
- verify_finite_time_lmi: AX+XAᵀ+BY+YᵀBᵀ+aX ≤ 0, XH+HX > 0, X > 0
- verify_hyper_lmi:       AX+XAᵀ+BY+YᵀBᵀ+γ(XH+HX) ≤ 0, XH+HX > 0, X > 0
- max_gamma_search / max_decay_search: 実行可能な最大 γ / a の二分探索
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from common.types import ContractViolationError
from ..lyapunov.dilation import Dilation
from .eigen import sym_eigs, symmetrize
from .plant import PlantConfig

PSD_TOLERANCE = 1e-9
MAX_DOUBLINGS = 200


class LmiKind(str, Enum):
    FINITE_TIME = "FiniteTimeLmi"
    HYPER = "HyperLmi"


@dataclass(frozen=True)
class GainCertificate:
    """ゲイン証明書（X = P⁻¹, Y = KX）"""
    X: np.ndarray
    Y: np.ndarray
    P: np.ndarray
    K: np.ndarray
    mu: float
    gamma_or_a: float
    which: LmiKind

    @classmethod
    def from_gains(cls, P: np.ndarray, K: np.ndarray, mu: float, value: float,
                   which: LmiKind) -> 'GainCertificate':
        P = symmetrize(P)
        K = np.asarray(K, dtype=float).reshape(1, -1)
        X = symmetrize(np.linalg.inv(P))
        return cls(X=X, Y=K @ X, P=P, K=K, mu=float(mu), gamma_or_a=float(value), which=LmiKind(which))

    @classmethod
    def from_xy(cls, X: np.ndarray, Y: np.ndarray, mu: float, value: float,
                which: LmiKind) -> 'GainCertificate':
        X = symmetrize(X)
        Y = np.asarray(Y, dtype=float).reshape(1, -1)
        P = symmetrize(np.linalg.inv(X))
        return cls(X=X, Y=Y, P=P, K=Y @ P, mu=float(mu), gamma_or_a=float(value), which=LmiKind(which))

    def with_value(self, value: float) -> 'GainCertificate':
        return GainCertificate(self.X, self.Y, self.P, self.K, self.mu, float(value), self.which)

    def consistency_error(self) -> float:
        """max(‖KX − Y‖, ‖PX − I‖)"""
        n = self.X.shape[0]
        return float(max(np.max(np.abs(self.K @ self.X - self.Y)),
                         np.max(np.abs(self.P @ self.X - np.eye(n)))))


@dataclass(frozen=True)
class VerificationReport:
    """固有値マージン（lmi_max ≤ tol, h_min > 0, x_min > 0 で実行可能）"""
    feasible: bool
    lmi_max: float
    h_min: float
    x_min: float
    tolerance: float

    @property
    def margins(self) -> Tuple[float, float, float]:
        return self.lmi_max, self.h_min, self.x_min


@dataclass(frozen=True)
class SearchResult:
    """最大実行可能値の探索結果"""
    feasible: bool
    value: float
    upper: float


def _check_dims(X: np.ndarray, Y: np.ndarray, plant: PlantConfig):
    if X.shape != (plant.n, plant.n) or Y.shape != (1, plant.n):
        raise ContractViolationError(
            f"次元不一致: X={X.shape}, Y={Y.shape}, n={plant.n}"
        )


def lmi_margins(X: np.ndarray, Y: np.ndarray, plant: PlantConfig, mu: float, value: float,
                which: LmiKind) -> VerificationReport:
    """LMI 左辺・XH+HX・X の極値固有値"""
    X = symmetrize(X)
    Y = np.asarray(Y, dtype=float).reshape(1, -1)
    _check_dims(X, Y, plant)

    H = Dilation.descending(mu, plant.n).generator
    XH = X @ H + H @ X
    lhs = plant.A @ X + X @ plant.A.T + plant.B @ Y + Y.T @ plant.B.T
    lhs = lhs + (value * XH if LmiKind(which) == LmiKind.HYPER else value * X)

    tolerance = PSD_TOLERANCE * float(np.linalg.norm(X, 'fro'))
    lmi_max = float(sym_eigs(symmetrize(lhs))[-1])
    h_min = float(sym_eigs(symmetrize(XH))[0])
    x_min = float(sym_eigs(X)[0])
    return VerificationReport(
        feasible=lmi_max <= tolerance and h_min > 0 and x_min > 0,
        lmi_max=lmi_max,
        h_min=h_min,
        x_min=x_min,
        tolerance=tolerance,
    )


def verify_finite_time_lmi(cert: GainCertificate, plant: PlantConfig) -> VerificationReport:
    """AX+XAᵀ+BY+YᵀBᵀ+aX ≤ 0, XH+HX > 0, X > 0"""
    if cert.which != LmiKind.FINITE_TIME:
        raise ContractViolationError(f"FiniteTimeLmi の証明書が必要です: {cert.which.value}")
    return lmi_margins(cert.X, cert.Y, plant, cert.mu, cert.gamma_or_a, LmiKind.FINITE_TIME)


def verify_hyper_lmi(cert: GainCertificate, plant: PlantConfig) -> VerificationReport:
    """AX+XAᵀ+BY+YᵀBᵀ+γ(XH+HX) ≤ 0, XH+HX > 0, X > 0"""
    if cert.which != LmiKind.HYPER:
        raise ContractViolationError(f"HyperLmi の証明書が必要です: {cert.which.value}")
    if not cert.gamma_or_a > 0:
        raise ContractViolationError(f"γ は正の値が必要です: {cert.gamma_or_a}")
    return lmi_margins(cert.X, cert.Y, plant, cert.mu, cert.gamma_or_a, LmiKind.HYPER)


def _max_feasible(X, Y, plant: PlantConfig, mu: float, tol: float, which: LmiKind) -> SearchResult:
    if not tol > 0:
        raise ContractViolationError(f"tol は正の値が必要です: {tol}")
    base = lmi_margins(X, Y, plant, mu, 0.0, which)
    if base.x_min <= 0 or base.h_min <= 0:
        raise ContractViolationError("X > 0 かつ XH+HX > 0 が必要です")

    def feasible(value: float) -> bool:
        return lmi_margins(X, Y, plant, mu, value, which).feasible

    if not feasible(tol):
        return SearchResult(feasible=False, value=0.0, upper=tol)

    lo, hi = tol, 1.0
    for _ in range(MAX_DOUBLINGS):
        if not feasible(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ContractViolationError("上限探索が発散しました")

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return SearchResult(feasible=True, value=lo, upper=hi)


def max_gamma_search(X, Y, plant: PlantConfig, mu: float, tol: float = 1e-6) -> SearchResult:
    """HyperLmi を満たす最大の γ（|γ* − 真値| ≤ tol、value は実行可能側）"""
    return _max_feasible(X, Y, plant, mu, tol, LmiKind.HYPER)


def max_decay_search(X, Y, plant: PlantConfig, mu: float, tol: float = 1e-6) -> SearchResult:
    """FiniteTimeLmi を満たす最大の a"""
    return _max_feasible(X, Y, plant, mu, tol, LmiKind.FINITE_TIME)
