#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Nested-exponential rate functions
入れ子指数関数による収束レート計算モジュール
- RateProfile: レートベクトル α と次数 r
- rho / sigma / sigma_product: 入れ子指数関数と逆方向の σ 再帰
- envelope / integrate_comparison: 減衰包絡線と比較微分方程式
- classify_decay: 軌道ノルムの減衰率分類（指数 / 超指数 / 判定不能）
- reference_curves: 基準収束曲線テーブル（ES, HES1, HES2, FTS）
- select_global_rate / norm_envelope_bound: 内外分岐レートの合成とノルム包絡線
"""

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from common.types import (
    ContractViolationError,
    DecayClass,
    DomainError,
    InsufficientDataError,
    IntegrationFailureError,
)

ArrayLike = Union[float, Sequence[float], np.ndarray]

# σ の引数がこれ未満なら +inf に飽和
SIGMA_SATURATION = math.exp(-700.0)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RateProfile:
    """レートベクトル α = (α_0, ..., α_r)"""
    alphas: Tuple[float, ...]

    def __init__(self, alphas: Sequence[float], degree: int = None):
        values = tuple(float(a) for a in alphas)
        if not values:
            raise ContractViolationError("alphas は1要素以上が必要です")
        if any(not (a > 0) or not math.isfinite(a) for a in values):
            raise ContractViolationError(f"alphas は全て正の有限値が必要です: {values}")
        if degree is not None and degree != len(values) - 1:
            raise ContractViolationError(
                f"degree={degree} と alphas の要素数 {len(values)} が一致しません"
            )
        object.__setattr__(self, 'alphas', values)

    @property
    def degree(self) -> int:
        return len(self.alphas) - 1

    def with_leading(self, alpha0: float) -> 'RateProfile':
        """α_0 だけ差し替えたプロファイル"""
        return RateProfile((alpha0,) + self.alphas[1:])


@dataclass(frozen=True)
class DecayThresholds:
    """減衰分類のしきい値"""
    monotone_fraction: float = 0.9
    growth_factor: float = 2.0
    norm_floor: float = 1e-12
    flat_tolerance: float = 0.1
    tie_tolerance: float = 1e-9


@dataclass
class DecayReport:
    """窓ごとの瞬時減衰率と分類結果"""
    window_times: List[float]
    instantaneous_rates: List[float]
    classification: DecayClass
    monotone_fraction: float
    thresholds: DecayThresholds = field(default_factory=DecayThresholds)

    @property
    def growth_ratio(self) -> float:
        first = self.instantaneous_rates[0]
        return self.instantaneous_rates[-1] / first if first > 0 else math.inf


def _check_level(profile: RateProfile, level: int, lowest: int):
    if not isinstance(level, (int, np.integer)) or not lowest <= level <= profile.degree:
        raise ContractViolationError(
            f"level={level} は [{lowest}, {profile.degree}] の範囲外です"
        )


def rho(profile: RateProfile, level: int, t: ArrayLike) -> ArrayLike:
    """ρ_level(t): ρ_0 = α_0 t, ρ_i = α_i (e^{ρ_{i-1}} - 1)"""
    _check_level(profile, level, 0)
    scalar = np.isscalar(t)
    value = profile.alphas[0] * np.asarray(t, dtype=float)
    with np.errstate(over='ignore'):
        for i in range(1, level + 1):
            value = profile.alphas[i] * np.expm1(value)
    return float(value) if scalar else value


def sigma(profile: RateProfile, level: int, s: float) -> float:
    """σ_level(s), s ∈ (0, 1]"""
    _check_level(profile, level, 1)
    if not (0.0 < s <= 1.0):
        raise DomainError(f"σ の引数は (0, 1] が必要です: s={s}")
    if s < SIGMA_SATURATION:
        return math.inf

    r = profile.degree
    alphas = profile.alphas
    value = -math.log(s) + alphas[r]
    for i in range(2, level + 1):
        value = math.log(max(value / alphas[r - i + 2], _EPS)) + alphas[r - i + 1]
    return value


def sigma_product(profile: RateProfile, s: float) -> float:
    """∏_{i=1}^{r} σ_i(s)（r=0 なら 1）"""
    if profile.degree == 0:
        if not (0.0 < s <= 1.0):
            raise DomainError(f"σ の引数は (0, 1] が必要です: s={s}")
        return 1.0
    product = 1.0
    for level in range(1, profile.degree + 1):
        product *= sigma(profile, level, s)
    return product


def envelope(profile: RateProfile, C: float, t: ArrayLike) -> ArrayLike:
    """C e^{-ρ_r(t)}"""
    if not C > 0:
        raise ContractViolationError(f"C は正の値が必要です: {C}")
    if np.any(np.asarray(t) < 0):
        raise ContractViolationError("t は非負が必要です")
    return C * np.exp(-rho(profile, profile.degree, t))


def integrate_comparison(profile: RateProfile, y0: float, horizon: float,
                         step: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    比較微分方程式 ẏ = -α_0 y ∏σ_i(y/y0) を固定刻みRK4で積分

    Returns:
        (times, values) いずれも長さ N+1
    """
    if not (y0 > 0 and step > 0 and horizon > 0):
        raise ContractViolationError(
            f"y0, horizon, step は正の値が必要です: y0={y0}, horizon={horizon}, step={step}"
        )

    alpha0 = profile.alphas[0]

    def rhs(y: float) -> float:
        return -alpha0 * y * sigma_product(profile, y / y0)

    steps = max(1, int(round(horizon / step)))
    times = np.arange(steps + 1) * step
    values = np.empty(steps + 1)
    values[0] = y = float(y0)

    for k in range(steps):
        t = times[k]
        try:
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * step * k1)
            k3 = rhs(y + 0.5 * step * k2)
            k4 = rhs(y + step * k3)
        except DomainError as e:
            raise IntegrationFailureError(f"比較方程式の積分が定義域を外れました: {e}", t)
        y = y + step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not (0.0 < y <= y0) or not math.isfinite(y):
            raise IntegrationFailureError("比較方程式の解が (0, y0] を外れました", times[k + 1])
        values[k + 1] = y

    return times, values


def _window_slope(times: np.ndarray, log_norms: np.ndarray) -> float:
    t_mean = times.mean()
    dt = times - t_mean
    denom = float(dt @ dt)
    if denom == 0.0:
        return 0.0
    return float(dt @ (log_norms - log_norms.mean())) / denom


def monotone_fraction(rates: Sequence[float], tie_tolerance: float = 1e-9) -> float:
    """隣接ペアの増加割合（相対差 tie_tolerance 以内の同値は 0.5 として数える）"""
    if len(rates) < 2:
        return 1.0
    score = 0.0
    for prev, cur in zip(rates[:-1], rates[1:]):
        scale = max(abs(prev), abs(cur), 1.0)
        if abs(cur - prev) <= tie_tolerance * scale:
            score += 0.5
        elif cur > prev:
            score += 1.0
    return score / (len(rates) - 1)


def classify_decay(times: Sequence[float], norms: Sequence[float], window: float,
                   thresholds: DecayThresholds = DecayThresholds()) -> DecayReport:
    """
    窓ごとの −ln‖x‖ の最小二乗傾きから減衰率を推定して分類

    Args:
        times: 時刻列（狭義単調増加）
        norms: 状態ノルム列（norm_floor で下限クリップ）
        window: 窓幅 [s]
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(norms, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise ContractViolationError("times と norms は同じ長さの1次元列が必要です")
    if not window > 0:
        raise ContractViolationError(f"window は正の値が必要です: {window}")
    if len(t) < 2 or np.any(np.diff(t) <= 0):
        raise InsufficientDataError("時刻列が短いか単調増加ではありません")
    if not np.all(np.isfinite(y)):
        raise ContractViolationError("norms に非有限値が含まれます")

    count = int(math.floor((t[-1] - t[0]) / window + 1e-9))
    if count < 3:
        raise InsufficientDataError(f"窓数 {count} < 3（window={window}, span={t[-1] - t[0]}）")

    log_norms = np.log(np.maximum(y, thresholds.norm_floor))
    centers, rates = [], []
    for k in range(count):
        lo = t[0] + k * window
        hi = lo + window
        mask = (t >= lo) & ((t < hi) if k < count - 1 else (t <= hi + 1e-12))
        if mask.sum() < 2:
            raise InsufficientDataError(f"窓 {k} のサンプル数が不足しています")
        centers.append(lo + 0.5 * window)
        rates.append(-_window_slope(t[mask], log_norms[mask]))

    fraction = monotone_fraction(rates, thresholds.tie_tolerance)
    first, last = rates[0], rates[-1]
    median = float(np.median(rates))
    spread = max(rates) - min(rates)

    if fraction >= thresholds.monotone_fraction and last > 0 and last > thresholds.growth_factor * first:
        classification = DecayClass.HYPEREXPONENTIAL
    elif spread <= thresholds.flat_tolerance * max(abs(median), 1.0):
        classification = DecayClass.EXPONENTIAL
    else:
        classification = DecayClass.INCONCLUSIVE

    return DecayReport(
        window_times=centers,
        instantaneous_rates=rates,
        classification=classification,
        monotone_fraction=fraction,
        thresholds=thresholds,
    )


REFERENCE_PROFILE = RateProfile((1.0, 1.0, 1.0))
FTS_END = 1.25


def reference_curves(grid: Sequence[float]) -> pd.DataFrame:
    """基準収束曲線 t, es, hes1, hes2, fts（α=(1,1,1)）"""
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise ContractViolationError("grid は非負の狭義単調増加列が必要です")

    with np.errstate(over='ignore'):
        es = np.exp(-rho(REFERENCE_PROFILE, 0, t))
        hes1 = np.exp(-rho(REFERENCE_PROFILE, 1, t))
        hes2 = np.exp(-rho(REFERENCE_PROFILE, 2, t))
    base = np.clip(1.0 - 0.8 * t, 0.0, None)
    fts = np.where(t >= FTS_END, 0.0, base ** 1.25)

    return pd.DataFrame({'t': t, 'es': es, 'hes1': hes1, 'hes2': hes2, 'fts': fts})


def select_global_rate(c1: float, c2: float, tail: Sequence[float], v0: float) -> RateProfile:
    """
    内側レート c1 と外側レート c2 から全域のレートベクトルを選ぶ

    α = (c1, α_1..α_r)            if c2 ≥ c1 ∏σ_i(1/V0)
    α = (c2/∏σ_i(1/V0), α_1..α_r)  otherwise
    """
    if not (c1 > 0 and c2 > 0 and v0 > 0):
        raise ContractViolationError(f"c1, c2, v0 は正の値が必要です: {c1}, {c2}, {v0}")
    profile = RateProfile((c1,) + tuple(tail))
    if v0 <= 1.0:
        return profile
    product = sigma_product(profile, 1.0 / v0)
    if c2 >= c1 * product:
        return profile
    return profile.with_leading(c2 / product)


def norm_envelope_bound(profile: RateProfile, k1: float, k2: float, a: float,
                        x0_norm: float, t: ArrayLike) -> ArrayLike:
    """‖x(t)‖ ≤ (k2/k1)^{1/a} ‖x0‖ e^{-ρ_r(t)/a}（k1‖x‖^a ≤ V ≤ k2‖x‖^a のとき）"""
    if not (k1 > 0 and k2 >= k1 and a > 0):
        raise ContractViolationError(f"0 < k1 ≤ k2, a > 0 が必要です: k1={k1}, k2={k2}, a={a}")
    with np.errstate(over='ignore'):
        return (k2 / k1) ** (1.0 / a) * x0_norm * np.exp(-rho(profile, profile.degree, t) / a)
