#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
帯域制限計測ノイズ
区間 sample_interval ごとに再サンプルする区分定数のガウスノイズ（分散 = power / sample_interval）
"""

import math
from dataclasses import dataclass

import numpy as np

from common.types import ContractViolationError

DEFAULT_NOISE_INTERVAL = 0.01


@dataclass(frozen=True)
class NoiseConfig:
    power: float
    sample_interval: float = DEFAULT_NOISE_INTERVAL
    seed: int = 0

    def __post_init__(self):
        if self.power < 0:
            raise ContractViolationError(f"ノイズ電力は非負が必要です: {self.power}")
        if not self.sample_interval > 0:
            raise ContractViolationError(f"sample_interval は正の値が必要です: {self.sample_interval}")

    @property
    def std(self) -> float:
        return math.sqrt(self.power / self.sample_interval)


class MeasurementNoise:
    """シード固定の区分定数ノイズ列（1シミュレーションにつき1インスタンス）"""

    def __init__(self, config: NoiseConfig, n: int):
        self.config = config
        self.n = n
        self.rng = np.random.default_rng(config.seed)
        self._value = np.zeros(n)
        self._index = 0

    def value(self, t: float) -> np.ndarray:
        # 時刻 t を含む区間まで進める（区間ごとに1回だけ乱数を引く）
        while t + 1e-9 * self.config.sample_interval >= self._index * self.config.sample_interval:
            self._value = self.rng.normal(0.0, self.config.std, self.n)
            self._index += 1
        return self._value

    def apply(self, x: np.ndarray, t: float) -> np.ndarray:
        if self.config.power == 0:
            return np.array(x, dtype=float)
        return x + self.value(t)


def apply_noise(x, noise: MeasurementNoise, t: float) -> np.ndarray:
    """計測値 = x + ノイズ(t)"""
    return noise.apply(np.asarray(x, dtype=float), t)
