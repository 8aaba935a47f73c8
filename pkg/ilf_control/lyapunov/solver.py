#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
IlfBisectionSolver - Q(V,x)=0 の二分法ソルバー
- 初期化: a = V_min, b = 1
- Q(b) > 0 なら区間を上方へ倍々拡張、Q(a) < 0 なら下方へ半減（V_min で下限クリップ）
- それ以外は中点で二分し V = b を返す
- 前回の区間 (a, b) からのウォームスタート対応
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from common.logger import ColorLogger
from common.types import DomainError, IlfSolverError
from .candidates import IlfCandidate

DEFAULT_V_MIN = 1e-9
DEFAULT_PRECISION = 1e-12
DEFAULT_MAX_ITERATIONS = 10000


@dataclass(frozen=True)
class SolveResult:
    """二分法の結果（value は区間上端 b）"""
    value: float
    clamped: bool
    iterations: int
    bracket: Tuple[float, float]


class IlfBisectionSolver:
    """ウォームスタート付き二分法ソルバー（軌道ごとに1インスタンス）"""

    def __init__(self, candidate: IlfCandidate, v_min: float = DEFAULT_V_MIN,
                 precision: float = DEFAULT_PRECISION,
                 max_iterations: int = DEFAULT_MAX_ITERATIONS,
                 logger: Optional[ColorLogger] = None):
        if not (v_min > 0 and precision > 0):
            raise DomainError(f"v_min と precision は正の値が必要です: {v_min}, {precision}")
        self.candidate = candidate
        self.v_min = float(v_min)
        self.precision = float(precision)
        self.max_iterations = int(max_iterations)
        self.logger = logger or ColorLogger(quiet=True)
        self.clamp_count = 0
        self.reset()

    def reset(self):
        """ウォームスタート状態を初期化（a = V_min, b = 1）"""
        self._a = self.v_min
        self._b = max(1.0, 2.0 * self.v_min)

    @property
    def bracket(self) -> Tuple[float, float]:
        return self._a, self._b

    def _q(self, V: float, x: np.ndarray) -> float:
        value = self.candidate.evaluate(V, x)
        if math.isnan(value):
            raise IlfSolverError(f"Q(V,x) が NaN です（V={V:.3e}）")
        return value

    def solve(self, x) -> SolveResult:
        x = self.candidate.as_state(x)
        if not np.all(np.isfinite(x)):
            raise DomainError("状態に非有限値が含まれます")
        if not np.any(x):
            raise DomainError("x = 0 では V を定義できません")

        a, b = self._a, self._b
        if not a < b:
            a, b = self.v_min, max(1.0, 2.0 * self.v_min)
        qa, qb = self._q(a, x), self._q(b, x)

        for iteration in range(1, self.max_iterations + 1):
            if qb > 0:
                a, qa = b, qb
                b = 2.0 * b
                if not math.isfinite(b):
                    raise IlfSolverError("区間上端が発散しました")
                qb = self._q(b, x)
            elif qa < 0:
                if a <= self.v_min:
                    self._on_clamp()
                    return SolveResult(self.v_min, True, iteration, (self.v_min, self.v_min))
                b, qb = a, qa
                a = max(0.5 * a, self.v_min)
                qa = self._q(a, x)
            elif b - a <= self.precision * b:
                self._a, self._b = a, b
                return SolveResult(b, False, iteration, (a, b))
            else:
                c = 0.5 * (a + b)
                qc = self._q(c, x)
                if qc < 0:
                    b, qb = c, qc
                else:
                    a, qa = max(self.v_min, c), qc

        raise IlfSolverError(f"二分法が {self.max_iterations} 回で収束しませんでした")

    def _on_clamp(self):
        if self.clamp_count == 0:
            self.logger.print_status(f"📌 ILF解が V_min={self.v_min:.1e} 未満のため下限クリップします")
        self.clamp_count += 1
        self.reset()


def solve_ilf_bisection(c: IlfCandidate, x, v_min: float = DEFAULT_V_MIN,
                        precision: float = DEFAULT_PRECISION) -> SolveResult:
    """初期化状態のソルバーで Q(V,x)=0 を解く"""
    return IlfBisectionSolver(c, v_min=v_min, precision=precision).solve(x)


def merged_v(q1_solver: IlfBisectionSolver, x) -> Tuple[float, bool]:
    """
    内側（xᵀPx < 1）は Q1 の根、外側は √(xᵀPx) を返す合成リアプノフ関数

    Returns:
        (V, clamped)
    """
    x = q1_solver.candidate.as_state(x)
    energy = float(x @ q1_solver.candidate.P @ x)
    if energy >= 1.0:
        return math.sqrt(energy), False
    result = q1_solver.solve(x)
    return result.value, result.clamped
