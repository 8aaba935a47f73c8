#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ClosedLoopSimulator - 固定ステップ閉ループシミュレーション

制御経路: 計測 ← x + ノイズ → V（サンプリング方針）→ u → 遅延 τ → プラント
u は各積分ステップ内で一定（積分解像度での零次ホールド）、状態は4次ルンゲ・クッタで更新する。
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd

from common.logger import ColorLogger
from common.types import ContractViolationError, IntegrationFailureError
from ..control.laws import ControllerSpec
from ..control.sampled import IlfController, LedgerEntry
from ..lmi.plant import PlantConfig
from .delay import DelayLine
from .noise import MeasurementNoise, NoiseConfig

DEFAULT_DT = 1e-3
DEFAULT_NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class SimConfig:
    """シミュレーション設定"""
    x0: Sequence[float]
    horizon: float = 10.0
    dt: float = DEFAULT_DT
    delay_tau: float = 0.0
    noise: Optional[NoiseConfig] = None
    norm_floor: float = DEFAULT_NORM_FLOOR

    def __post_init__(self):
        object.__setattr__(self, 'x0', np.asarray(self.x0, dtype=float).reshape(-1))
        if not (self.dt > 0 and self.horizon > 0 and self.norm_floor > 0):
            raise ContractViolationError("dt・horizon・norm_floor は正の値が必要です")
        if self.delay_tau < 0:
            raise ContractViolationError(f"delay_tau は非負が必要です: {self.delay_tau}")
        if self.noise is not None and self.noise.sample_interval < self.dt:
            raise ContractViolationError(
                f"ノイズのサンプル間隔 {self.noise.sample_interval} は dt={self.dt} 以上が必要です"
            )

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.dt))

    @property
    def delay_steps(self) -> int:
        return int(round(self.delay_tau / self.dt))

    @property
    def delay_is_exact(self) -> bool:
        return abs(self.delay_steps * self.dt - self.delay_tau) <= 1e-9 * max(self.dt, self.delay_tau)


@dataclass
class Trajectory:
    """時刻付きの閉ループ記録"""
    times: np.ndarray
    states: np.ndarray
    measured: np.ndarray
    controls: np.ndarray
    v_values: np.ndarray
    norms: np.ndarray
    clamped: np.ndarray
    norm_floor: float = DEFAULT_NORM_FLOOR
    ledger: List[LedgerEntry] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.states.shape[1]

    def floored_norms(self) -> np.ndarray:
        """記録・分類用にクランプしたノルム（力学には使わない）"""
        return np.maximum(self.norms, self.norm_floor)

    def first_clamp_index(self) -> int:
        """最初にクリップされたサンプルの添字（なければ長さ）"""
        hits = np.flatnonzero(self.clamped)
        return int(hits[0]) if hits.size else len(self.times)

    def residual(self, fraction: float = 0.2) -> float:
        """定常残差: 区間最後の fraction における ‖x‖ の中央値"""
        start = int(math.floor(len(self.times) * (1.0 - fraction)))
        return float(np.median(self.norms[start:]))

    def to_frame(self) -> pd.DataFrame:
        """CSV 用テーブル（t,x1..xn,u,V,norm）"""
        data = {'t': self.times}
        for i in range(self.n):
            data[f'x{i + 1}'] = self.states[:, i]
        data['u'] = self.controls
        data['V'] = self.v_values
        data['norm'] = self.floored_norms()
        return pd.DataFrame(data)


def rk4_step(f: Callable[[np.ndarray, float], np.ndarray], x: np.ndarray, u: float, dt: float) -> np.ndarray:
    """u を一定とした古典的4次ルンゲ・クッタ1ステップ"""
    k1 = f(x, u)
    k2 = f(x + 0.5 * dt * k1, u)
    k3 = f(x + 0.5 * dt * k2, u)
    k4 = f(x + dt * k3, u)
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class ClosedLoopSimulator:
    """閉ループ積分器"""

    def __init__(self, plant: PlantConfig, controller: ControllerSpec, config: SimConfig,
                 logger: Optional[ColorLogger] = None):
        if controller.n != plant.n or config.x0.size != plant.n:
            raise ContractViolationError(
                f"次元不一致: plant n={plant.n}, controller n={controller.n}, x0={config.x0.size}"
            )
        self.plant = plant
        self.spec = controller
        self.config = config
        self.logger = logger or ColorLogger(quiet=True)
        self._b = plant.B.reshape(-1)

        if not config.delay_is_exact:
            self.logger.print_warning(
                f"⚠️ 遅延 τ={config.delay_tau} を dt の整数倍 {config.delay_steps * config.dt:g} に丸めます"
            )

    def field(self, x: np.ndarray, u: float) -> np.ndarray:
        """ẋ = Ax + Bu"""
        return self.plant.A @ x + self._b * u

    def integrate(self) -> Trajectory:
        cfg = self.config
        steps = cfg.steps
        n = self.plant.n

        controller = IlfController(self.spec, self.logger)
        noise = MeasurementNoise(cfg.noise, n) if cfg.noise is not None else None
        delay = DelayLine(cfg.delay_steps)

        times = np.arange(steps + 1) * cfg.dt
        states = np.zeros((steps + 1, n))
        measured = np.zeros((steps + 1, n))
        controls = np.zeros(steps + 1)
        v_values = np.zeros(steps + 1)
        clamped = np.zeros(steps + 1, dtype=bool)

        x = cfg.x0.copy()
        for k in range(steps + 1):
            t = times[k]
            y = noise.apply(x, t) if noise is not None else x.copy()
            output = controller.control(t, y)
            u = delay.push(output.u)

            states[k] = x
            measured[k] = y
            controls[k] = u
            v_values[k] = controller.current_v
            clamped[k] = output.clamped

            if k == steps:
                break
            x = rk4_step(self.field, x, u, cfg.dt)
            if not np.all(np.isfinite(x)):
                self.logger.print_error(f"❌ 状態が非有限値になりました (t={times[k + 1]:.6g})")
                raise IntegrationFailureError("閉ループ状態が発散しました", float(times[k + 1]))

        return Trajectory(
            times=times,
            states=states,
            measured=measured,
            controls=controls,
            v_values=v_values,
            norms=np.linalg.norm(states, axis=1),
            clamped=clamped,
            norm_floor=cfg.norm_floor,
            ledger=list(controller.ledger),
        )


def integrate(plant: PlantConfig, controller: ControllerSpec, config: SimConfig,
              logger: Optional[ColorLogger] = None) -> Trajectory:
    return ClosedLoopSimulator(plant, controller, config, logger).integrate()
