#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
IlfController - ILF制御器のサンプル時刻実現

機能:
- サンプル時刻 t_i で Q(V_i, x(t_i)) = 0 を解き、次のサンプルまで V_i を保持
- 区間内の制御は現在の（ノイズ付き）計測値 x(t) を用いる
- V_min クリップ時は線形フィードバック Kx に切り替え
- ソルバー失敗時は直前の V_i を保持してフラグを立てる
- (t_i, V_i, clamped, branch) の台帳を記録
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from common.logger import ColorLogger
from common.types import ContractViolationError, DomainError, IlfSolverError
from ..lmi.plant import PlantConfig
from ..lyapunov.solver import IlfBisectionSolver, merged_v
from .laws import Branch, ControllerSpec, ControllerVariant, ControlValue, control_law, u_linear

SAMPLE_TIME_SLACK = 1e-9


@dataclass(frozen=True)
class LedgerEntry:
    """サンプル時刻ごとの記録"""
    t: float
    v: float
    clamped: bool
    branch: Branch
    held: bool = False


class IlfController:
    """ILF制御器（1シミュレーションにつき1インスタンス）"""

    def __init__(self, spec: ControllerSpec, logger: Optional[ColorLogger] = None):
        self.spec = spec
        self.logger = logger or ColorLogger(quiet=True)
        self.inner_solver = IlfBisectionSolver(
            spec.inner_candidate, v_min=spec.v_min, precision=spec.bisect_precision, logger=self.logger
        )
        self.outer_solver = None
        if spec.outer_candidate is not None:
            self.outer_solver = IlfBisectionSolver(
                spec.outer_candidate, v_min=spec.v_min, precision=spec.bisect_precision, logger=self.logger
            )
        self.ledger: List[LedgerEntry] = []
        self.failure_count = 0
        self._held: Optional[LedgerEntry] = None
        self._sample_index = 0
        self.last_output: Optional[ControlValue] = None

    @property
    def clamp_count(self) -> int:
        count = self.inner_solver.clamp_count
        if self.outer_solver is not None:
            count += self.outer_solver.clamp_count
        return count

    @property
    def current_v(self) -> float:
        return self._held.v if self._held is not None else math.nan

    def solve_v(self, x: np.ndarray) -> Tuple[float, bool, Branch]:
        """計測状態から V と分岐を求める"""
        spec = self.spec
        if not np.any(x):
            return spec.v_min, True, Branch.ORIGIN
        if spec.variant == ControllerVariant.LINEAR:
            return math.sqrt(spec.energy(x)), False, Branch.LINEAR
        if spec.variant == ControllerVariant.FINITE_TIME:
            result = self.inner_solver.solve(x)
            return result.value, result.clamped, Branch.INNER

        inside = spec.energy(x) < 1.0
        if spec.variant == ControllerVariant.HYPER:
            V, clamped = merged_v(self.inner_solver, x)
        else:
            result = (self.inner_solver if inside else self.outer_solver).solve(x)
            V, clamped = result.value, result.clamped
        return V, clamped, Branch.INNER if inside else Branch.OUTER

    def _is_sample_time(self, t: float) -> bool:
        period = self.spec.sampling.period
        if period is None or self._held is None:
            return True
        return t + SAMPLE_TIME_SLACK * max(period, 1.0) >= self._sample_index * period

    def sample(self, t: float, x: np.ndarray) -> LedgerEntry:
        """サンプル時刻 t_i で V_i を解いて台帳に記録"""
        try:
            V, clamped, branch = self.solve_v(x)
            entry = LedgerEntry(t, V, clamped, branch)
        except (IlfSolverError, DomainError) as e:
            self.failure_count += 1
            self.inner_solver.reset()
            if self.outer_solver is not None:
                self.outer_solver.reset()
            if self._held is None:
                entry = LedgerEntry(t, self.spec.v_min, True, Branch.LINEAR, held=True)
            else:
                entry = LedgerEntry(t, self._held.v, self._held.clamped, self._held.branch, held=True)
            self.logger.print_warning(f"⚠️ ILF解の計算に失敗したため V={entry.v:.3e} を保持します (t={t:.4g}): {e}")
        self.ledger.append(entry)
        self._held = entry
        if self.spec.sampling.period is not None:
            self._sample_index = int(math.floor(t / self.spec.sampling.period + SAMPLE_TIME_SLACK)) + 1
        return entry

    def control(self, t: float, x) -> ControlValue:
        """時刻 t、計測値 x での制御入力（必要ならサンプリングを行う）"""
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.spec.n:
            raise ContractViolationError(f"状態次元 {x.size} と P の次元 {self.spec.n} が不一致です")
        if self._is_sample_time(t):
            self.sample(t, x)
        held = self._held
        if held.clamped or held.branch in (Branch.LINEAR, Branch.ORIGIN):
            value = u_linear(self.spec, x)
            value = ControlValue(value.u, held.clamped, value.branch)
        else:
            value = control_law(self.spec, held.v, x)
        self.last_output = value
        return value

    def ledger_frame(self) -> pd.DataFrame:
        return ledger_frame(self.ledger)


def ledger_frame(entries: Sequence[LedgerEntry]) -> pd.DataFrame:
    """台帳 CSV 用テーブル（t_i,V_i,clamped,branch）"""
    return pd.DataFrame({
        't_i': [e.t for e in entries],
        'V_i': [e.v for e in entries],
        'clamped': [e.clamped for e in entries],
        'branch': [e.branch.value for e in entries],
    })


def sampled_controller(spec: ControllerSpec, plant: PlantConfig,
                       logger: Optional[ColorLogger] = None) -> IlfController:
    """周期サンプリングの制御器を生成"""
    if spec.sampling.is_continuous:
        raise ContractViolationError("sampled_controller には Sampled(period) の仕様が必要です")
    if spec.n != plant.n:
        raise ContractViolationError(f"制御器の次元 {spec.n} とプラントの次元 {plant.n} が不一致です")
    return IlfController(spec, logger)
