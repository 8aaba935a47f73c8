#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Condition samplers
リアプノフ条件の数値サンプリング検証

- shell_samples: 対数間隔の球殻上のサンプル状態
- check_c4_c5: ∂Q/∂V < 0 と Q1(1,x) = Q2(1,x)
- check_differential_conditions: 閉ループ場に沿った減少条件（C6: V ≤ 1, C7: V ≥ 1）
- check_norm_bounds: V と ‖x‖ の比較定数（C8 / C9 / C10）
- beta_rate_margin: −V̇/V が V⁻¹ について非減少かの経験的判定
- nested_level_diagnostics: サンプル時刻の楕円体レベルとレート c_i
- estimate_alpha1 / quadratic_decay_rate: 定数の推定

margin は全て「最悪スラック」で、正（または0）なら条件成立。
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from common.types import ContractViolationError, InsufficientDataError, MissingSampleError
from ..lmi.eigen import lambda_max, sym_sqrt
from ..rates.ratefn import RateProfile, sigma_product
from .candidates import IlfCandidate
from .dilation import LN_E_MINUS_ONE, Dilation, varrho
from .solver import IlfBisectionSolver

DIFFERENTIAL_SLACK = 1e-8
C5_TOLERANCE = 1e-12
SHELL_SAMPLES = 500


class ConditionId(str, Enum):
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    C7 = "C7"
    C8 = "C8"
    C9 = "C9"
    C10 = "C10"
    BETA_RATE = "BetaRate"
    NESTED_LEVELS = "NestedLevels"


@dataclass
class ConditionReport:
    """条件検証レポート"""
    condition_id: ConditionId
    holds: bool
    margin: float
    estimated_constants: Dict[str, float] = field(default_factory=dict)
    sample_count: int = 0
    worst_sample: Optional[np.ndarray] = None
    skipped_count: int = 0
    flags: Dict[str, bool] = field(default_factory=dict)

    def to_rows(self) -> List[Dict[str, object]]:
        """CSV行 condition,holds,margin,constant_name,constant_value"""
        base = {'condition': self.condition_id.value, 'holds': self.holds, 'margin': self.margin}
        if not self.estimated_constants:
            return [{**base, 'constant_name': '', 'constant_value': float('nan')}]
        return [{**base, 'constant_name': name, 'constant_value': value}
                for name, value in self.estimated_constants.items()]

    def format_text(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        lines = [f"[{self.condition_id.value}] {status} margin={self.margin:.6g} "
                 f"samples={self.sample_count} skipped={self.skipped_count}"]
        for name, value in self.estimated_constants.items():
            lines.append(f"    {name} = {value:.6g}")
        for name, value in self.flags.items():
            lines.append(f"    {name}: {value}")
        if self.worst_sample is not None:
            lines.append(f"    worst_sample = {np.array2string(np.asarray(self.worst_sample), precision=4)}")
        return "\n".join(lines)


def shell_samples(n: int, count: int = SHELL_SAMPLES, r_min: float = 1e-4, r_max: float = 1e2,
                  seed: int = 0) -> np.ndarray:
    """対数間隔の半径 × 一様方向のサンプル（count × n）"""
    if count < 1 or not 0 < r_min < r_max:
        raise ContractViolationError(f"不正なサンプル設定: count={count}, r=[{r_min}, {r_max}]")
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = np.logspace(math.log10(r_min), math.log10(r_max), count)
    return directions * radii[:, None]


def _as_samples(samples) -> List[np.ndarray]:
    points = [np.asarray(x, dtype=float).reshape(-1) for x in samples]
    if not points:
        raise InsufficientDataError("サンプル集合が空です")
    return points


def check_c4_c5(c1: IlfCandidate, c2: IlfCandidate,
                samples: Iterable[Tuple[float, Sequence[float]]]) -> ConditionReport:
    """
    C4: V·∂Q/∂V / (Q+1) < 0（両候補、中心差分）
    C5: Q1(1,x) = Q2(1,x)（厳密評価）
    """
    pairs = [(float(V), np.asarray(x, dtype=float).reshape(-1)) for V, x in samples]
    if not pairs:
        raise InsufficientDataError("サンプル集合が空です")

    c4_slack, c5_deviation = math.inf, 0.0
    worst_c4, worst_c5 = None, None
    for V, x in pairs:
        if not np.any(x):
            raise ContractViolationError("サンプルに x = 0 が含まれます")
        for candidate in (c1, c2):
            energy = candidate.evaluate(V, x) + 1.0
            slack = -V * candidate.dq_dv_numeric(V, x) / energy
            if slack < c4_slack:
                c4_slack, worst_c4 = slack, x
        deviation = abs(c1.evaluate(1.0, x) - c2.evaluate(1.0, x))
        if deviation > c5_deviation or worst_c5 is None:
            c5_deviation, worst_c5 = deviation, x

    c4_holds = c4_slack > 0
    c5_holds = c5_deviation <= C5_TOLERANCE
    margin = min(c4_slack, 0.0 - c5_deviation)
    return ConditionReport(
        condition_id=ConditionId.C5,
        holds=c4_holds and c5_holds,
        margin=margin,
        estimated_constants={'c4_margin': c4_slack, 'c5_margin': c5_deviation},
        sample_count=len(pairs),
        worst_sample=worst_c4 if not c4_holds else worst_c5,
        flags={'c4_holds': c4_holds, 'c5_holds': c5_holds},
    )


def check_differential_conditions(c: IlfCandidate,
                                  closed_loop_field: Callable[[np.ndarray], np.ndarray],
                                  regime: ConditionId,
                                  rate: float,
                                  samples: Iterable[Sequence[float]],
                                  profile: Optional[RateProfile] = None,
                                  v_min: float = 1e-300,
                                  precision: float = 1e-12) -> ConditionReport:
    """
    C6: ∂Q/∂x·f ≤ c1·V·∏σ_i(V)·∂Q/∂V（V ∈ (0,1]）
    C7: ∂Q/∂x·f ≤ c2·V·∂Q/∂V（V ≥ 1）

    スラック (rhs − lhs)/|rhs| の最小値を margin とし、−1e-8 以上で成立。
    反対側の分岐にある標本・V_min でクリップされた標本はスキップして数える。
    """
    if regime not in (ConditionId.C6, ConditionId.C7):
        raise ContractViolationError(f"regime は C6 / C7 が必要です: {regime}")
    if not rate > 0:
        raise ContractViolationError(f"レート定数は正の値が必要です: {rate}")
    if regime == ConditionId.C6 and profile is None:
        profile = RateProfile((rate, LN_E_MINUS_ONE))

    points = _as_samples(samples)
    solver = IlfBisectionSolver(c, v_min=v_min, precision=precision)

    worst, worst_x, skipped, used = math.inf, None, 0, 0
    c_hat = math.inf
    for x in points:
        result = solver.solve(x)
        V = result.value
        on_branch = V <= 1.0 if regime == ConditionId.C6 else V >= 1.0
        if result.clamped or not on_branch:
            skipped += 1
            continue

        lhs = float(c.dq_dx_numeric(V, x) @ np.asarray(closed_loop_field(x), dtype=float))
        weight = V * c.dq_dv_numeric(V, x)
        if regime == ConditionId.C6:
            weight *= sigma_product(profile, V)
        rhs = rate * weight
        slack = (rhs - lhs) / abs(rhs)
        used += 1
        c_hat = min(c_hat, lhs / weight)
        if slack < worst:
            worst, worst_x = slack, x

    if used == 0:
        raise InsufficientDataError(f"{regime.value} の分岐上に有効な標本がありません（skipped={skipped}）")

    constants = {'c_hat': c_hat, 'rate': rate}
    if regime == ConditionId.C6:
        constants.update({f'alpha_{i}': a for i, a in enumerate(profile.alphas) if i > 0})
    return ConditionReport(
        condition_id=regime,
        holds=worst >= -DIFFERENTIAL_SLACK,
        margin=worst,
        estimated_constants=constants,
        sample_count=used,
        worst_sample=worst_x,
        skipped_count=skipped,
    )


def check_norm_bounds(c: IlfCandidate, regime: ConditionId, samples: Iterable[Sequence[float]],
                      alpha_r: float = LN_E_MINUS_ONE, v_min: float = 1e-300,
                      precision: float = 1e-12) -> ConditionReport:
    """
    C8:  k1‖x‖^a ≤ V ≤ k2‖x‖^a（a は log-log 最小二乗で推定）
    C9:  α_r/(−ln V + 1) ≥ k‖x‖（V ≤ 1 の標本のみ）
    C10: k1‖x‖ ≤ V ≤ k2‖x‖（V ≥ 1 の標本のみ）
    """
    if regime not in (ConditionId.C8, ConditionId.C9, ConditionId.C10):
        raise ContractViolationError(f"regime は C8 / C9 / C10 が必要です: {regime}")

    points = _as_samples(samples)
    solver = IlfBisectionSolver(c, v_min=v_min, precision=precision)

    values, norms, states, skipped = [], [], [], 0
    for x in points:
        result = solver.solve(x)
        V = result.value
        if result.clamped:
            skipped += 1
            continue
        if (regime == ConditionId.C9 and V > 1.0) or (regime == ConditionId.C10 and V < 1.0):
            skipped += 1
            continue
        values.append(V)
        norms.append(float(np.linalg.norm(x)))
        states.append(x)

    if not values:
        raise InsufficientDataError(f"{regime.value} の対象標本がありません（skipped={skipped}）")

    V = np.asarray(values)
    r = np.asarray(norms)
    constants: Dict[str, float] = {}

    if regime == ConditionId.C9:
        ratios = alpha_r / ((-np.log(V) + 1.0) * r)
        idx = int(np.argmin(ratios))
        constants['k'] = float(ratios[idx])
        margin = constants['k']
    else:
        if regime == ConditionId.C8:
            if len(V) >= 2 and np.ptp(np.log(r)) > 0:
                a = float(np.polyfit(np.log(r), np.log(V), 1)[0])
            else:
                a = 1.0
            constants['a'] = a
        else:
            a = 1.0
        ratios = V / r ** a
        idx = int(np.argmin(ratios))
        constants['k1'] = float(ratios[idx])
        constants['k2'] = float(np.max(ratios))
        margin = constants['k1']

    holds = bool(margin > 0 and math.isfinite(margin) and
                 all(math.isfinite(v) for v in constants.values()))
    return ConditionReport(
        condition_id=regime,
        holds=holds,
        margin=margin,
        estimated_constants=constants,
        sample_count=len(values),
        worst_sample=states[idx],
        skipped_count=skipped,
    )


def beta_rate_margin(times: Sequence[float], v_series: Sequence[float],
                     allowed_violations: float = 0.05, tie_tolerance: float = 1e-6) -> ConditionReport:
    """
    β̂(V⁻¹) = −Δln V/Δt を V⁻¹ 順に並べ、正かつ非減少か（違反ペア 5% まで許容）を判定。
    growth フラグは末尾1割の平均が先頭1割の平均を上回るかどうか。
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(v_series, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise ContractViolationError("times と v_series は同じ長さの1次元列が必要です")
    if len(v) < 3:
        raise InsufficientDataError(f"V 系列が短すぎます: {len(v)} 点")
    if np.any(v <= 0) or np.any(np.diff(t) <= 0):
        raise ContractViolationError("V は正、時刻は狭義単調増加が必要です")

    log_v = np.log(v)
    beta = -np.diff(log_v) / np.diff(t)
    inverse_level = np.exp(-0.5 * (log_v[:-1] + log_v[1:]))
    beta = beta[np.argsort(inverse_level, kind='stable')]

    drops = 0
    for prev, cur in zip(beta[:-1], beta[1:]):
        if cur < prev - tie_tolerance * max(abs(prev), 1.0):
            drops += 1
    violation_fraction = drops / max(len(beta) - 1, 1)

    decile = max(1, len(beta) // 10)
    first, last = float(np.mean(beta[:decile])), float(np.mean(beta[-decile:]))
    growth = last > first + tie_tolerance * max(abs(first), 1.0)

    beta_min = float(np.min(beta))
    margin = min(beta_min, allowed_violations - violation_fraction)
    nondecreasing = violation_fraction <= allowed_violations
    return ConditionReport(
        condition_id=ConditionId.BETA_RATE,
        holds=bool(beta_min > 0 and nondecreasing),
        margin=margin,
        estimated_constants={
            'beta_min': beta_min,
            'beta_first_decile': first,
            'beta_last_decile': last,
            'nonmonotone_fraction': violation_fraction,
        },
        sample_count=len(beta),
        flags={'nondecreasing': nondecreasing, 'growth': bool(growth)},
    )


@dataclass(frozen=True)
class NestedLevel:
    """サンプル時刻ごとの楕円体レベル"""
    time: float
    v: float
    v_tilde: float
    rate: float


def nested_level_diagnostics(trajectory, P: np.ndarray, mu: float, a: float,
                             sample_times: Sequence[float]) -> List[NestedLevel]:
    """
    各サンプル時刻 t_i で保持された V_i から
    Ṽ_i = x(t_i)ᵀ D(V_i⁻¹) P D(V_i⁻¹) x(t_i) と c_i = a·V_i^{−μ} を求める
    """
    times = np.asarray(trajectory.times, dtype=float)
    P = np.asarray(P, dtype=float)
    dilation = Dilation.descending(mu, P.shape[0])
    tolerance = 0.5 * (times[1] - times[0]) if len(times) > 1 else 1e-12

    levels = []
    for t_i in sample_times:
        idx = int(np.argmin(np.abs(times - t_i)))
        if abs(times[idx] - t_i) > tolerance:
            raise MissingSampleError(t_i)
        V_i = float(trajectory.v_values[idx])
        y = dilation.scale(1.0 / V_i, np.asarray(trajectory.states[idx], dtype=float))
        levels.append(NestedLevel(
            time=float(times[idx]),
            v=V_i,
            v_tilde=float(y @ P @ y),
            rate=a * V_i ** (-mu),
        ))
    return levels


def nested_levels_report(levels: Sequence[NestedLevel], v_floor: float = 0.0) -> ConditionReport:
    """V_i 狭義減少・c_i 狭義増加の判定（V_i ≥ v_floor の区間のみ）"""
    active = [lv for lv in levels if lv.v >= v_floor]
    if not active:
        raise InsufficientDataError("判定対象のサンプルがありません")
    v_gaps = [(prev.v - cur.v) / prev.v for prev, cur in zip(active[:-1], active[1:])]
    c_gaps = [(cur.rate - prev.rate) / prev.rate for prev, cur in zip(active[:-1], active[1:])]
    v_decreasing = all(gap > 0 for gap in v_gaps)
    c_increasing = all(gap > 0 for gap in c_gaps)
    margin = min(v_gaps + c_gaps) if v_gaps else 0.0
    return ConditionReport(
        condition_id=ConditionId.NESTED_LEVELS,
        holds=v_decreasing and c_increasing,
        margin=margin,
        estimated_constants={
            'v_first': active[0].v,
            'v_last': active[-1].v,
            'c_first': active[0].rate,
            'c_last': active[-1].rate,
            'v_tilde_max_deviation': max(abs(lv.v_tilde - 1.0) for lv in active),
        },
        sample_count=len(active),
        flags={'v_decreasing': v_decreasing, 'c_increasing': c_increasing},
    )


def estimate_alpha1(mu: float, grid: Optional[np.ndarray] = None) -> float:
    """α̂1 = inf_{V∈(0,1]} [ϱ^μ(V) − ln((−ln V + ln(e−1))/ln(e−1))]"""
    if grid is None:
        grid = np.logspace(-300, 0, 3001)
    values = [varrho(V) ** mu - math.log((-math.log(V) + LN_E_MINUS_ONE) / LN_E_MINUS_ONE)
              for V in grid]
    return float(min(values))


def quadratic_decay_rate(P: np.ndarray, A_cl: np.ndarray) -> float:
    """c2 = −λ_max(sym(P^{1/2} A_cl P^{−1/2}))"""
    root = sym_sqrt(P)
    M = root @ np.asarray(A_cl, dtype=float) @ np.linalg.inv(root)
    return -lambda_max(M)


def linear_field(A_cl: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    A_cl = np.asarray(A_cl, dtype=float)
    return lambda x: A_cl @ x
