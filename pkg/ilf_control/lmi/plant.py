#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
PlantConfig - 積分器連鎖プラント ẋ = Ax + Bu
"""

from dataclasses import dataclass

import numpy as np

from common.types import ContractViolationError, DomainError


@dataclass(frozen=True)
class PlantConfig:
    """線形プラント（単入力）"""
    n: int
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float).reshape(-1, 1)
        if A.shape != (self.n, self.n) or B.shape != (self.n, 1):
            raise ContractViolationError(
                f"次元不一致: n={self.n}, A={A.shape}, B={B.shape}"
            )
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'B', B)

    def controllability_matrix(self) -> np.ndarray:
        """[B, AB, ..., A^{n-1}B]"""
        blocks = [self.B]
        for _ in range(self.n - 1):
            blocks.append(self.A @ blocks[-1])
        return np.hstack(blocks)

    def controllability_rank(self) -> int:
        return int(np.linalg.matrix_rank(self.controllability_matrix()))

    def is_controllable(self) -> bool:
        return self.controllability_rank() == self.n

    def closed_loop(self, K: np.ndarray) -> np.ndarray:
        """A + BK"""
        K = np.asarray(K, dtype=float).reshape(1, -1)
        if K.shape[1] != self.n:
            raise ContractViolationError(f"ゲイン次元不一致: K={K.shape}, n={self.n}")
        return self.A + self.B @ K


def build_chain(n: int) -> PlantConfig:
    """n 次積分器連鎖（A: 上対角1, B = e_n）"""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n は1以上の整数が必要です: {n}")
    A = np.eye(n, k=1)
    B = np.zeros((n, 1))
    B[-1, 0] = 1.0
    return PlantConfig(n=int(n), A=A, B=B)


def chain_gain_from_poles(poles) -> np.ndarray:
    """
    積分器連鎖の極配置ゲイン K（1×n）

    A+BK の最終行が K なので、特性多項式 s^n + c_1 s^{n-1} + ... + c_n に対し K_i = -c_{n-i+1}
    """
    coeffs = np.real(np.poly(np.asarray(poles)))
    return -coeffs[:0:-1].reshape(1, -1)
