#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
GainSynthesizer - HyperLmi を満たす (X, Y) のベストエフォート探索

機能:
- 極配置ゲインと連続リアプノフ方程式による初期候補の生成
- φ(X,Y) = λ_max(LMI左辺) の座標摂動による最小化（ステップ半減、シード固定）
- verify_hyper_lmi を通過した証明書のみを返す
- LMI は (X, Y) について斉次なので、探索は ‖X‖_F 正規化で行い、最後に (sX, sY) へ拡大して
  絶対マージン λ_min(X) ≥ δ, λ_min(XH+HX) ≥ δ を満たす（K = YX⁻¹ は不変）
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from common.logger import ColorLogger
from common.types import ContractViolationError
from ..lyapunov.dilation import Dilation
from .eigen import sym_eigs, symmetrize
from .plant import PlantConfig, build_chain, chain_gain_from_poles
from .verifier import GainCertificate, LmiKind, verify_hyper_lmi

SYNTHESIS_DELTA = 1e-3
POLE_SCALES = (0.5, 1.0, 2.0, 3.0, 5.0, 8.0)
POLE_SPREADS = (0.5, 0.1)
MIN_STEP = 1e-12


@dataclass(frozen=True)
class SynthesisResult:
    """合成結果（found=False の場合 certificate は None）"""
    found: bool
    certificate: Optional[GainCertificate]
    objective: float
    iterations: int
    seeds_tried: int
    x_min: float = math.nan
    h_min: float = math.nan


class GainSynthesizer:
    """積分器連鎖向けの HyperLmi ゲイン探索"""

    def __init__(self, plant: PlantConfig, mu: float, gamma_target: float,
                 delta: float = SYNTHESIS_DELTA, logger: Optional[ColorLogger] = None):
        if not plant.is_controllable():
            raise ContractViolationError("プラントが可制御ではありません")
        if not np.array_equal(plant.A, build_chain(plant.n).A) or \
                not np.array_equal(plant.B, build_chain(plant.n).B):
            raise ContractViolationError("ゲイン合成は積分器連鎖のみ対応しています")
        if not gamma_target > 0:
            raise ContractViolationError(f"gamma_target は正の値が必要です: {gamma_target}")
        self.plant = plant
        self.mu = float(mu)
        self.gamma = float(gamma_target)
        self.delta = float(delta)
        self.H = Dilation.descending(mu, plant.n).generator
        self.logger = logger or ColorLogger(quiet=True)

    # ---- objective -------------------------------------------------------

    def objective(self, X: np.ndarray, Y: np.ndarray) -> float:
        """正規化した λ_max(LMI左辺) と δ 制約違反のペナルティ"""
        X = symmetrize(X)
        scale = max(float(np.linalg.norm(X, 'fro')), np.finfo(float).tiny)
        A, B = self.plant.A, self.plant.B
        XH = X @ self.H + self.H @ X
        lhs = A @ X + X @ A.T + B @ Y + Y.T @ B.T + self.gamma * XH
        phi = float(sym_eigs(symmetrize(lhs))[-1]) / scale
        x_gap = self.delta - float(sym_eigs(X)[0]) / scale
        h_gap = self.delta - float(sym_eigs(symmetrize(XH))[0]) / scale
        return phi + 10.0 * (max(x_gap, 0.0) + max(h_gap, 0.0))

    def meet_delta(self, X: np.ndarray, Y: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """min(λ_min(X), λ_min(XH+HX)) ≥ δ となるよう (X, Y) を拡大（縮小はしない）"""
        X = symmetrize(X)
        floor = min(float(sym_eigs(X)[0]), float(sym_eigs(symmetrize(X @ self.H + self.H @ X))[0]))
        if not floor > 0:
            return None
        Y = np.asarray(Y, dtype=float)
        if floor >= self.delta:
            return X, Y
        s = self.delta / floor * (1.0 + 1e-9)
        return s * X, s * Y

    def _certificate(self, X: np.ndarray, Y: np.ndarray) -> Optional[GainCertificate]:
        scaled = self.meet_delta(X, Y)
        if scaled is None:
            return None
        try:
            cert = GainCertificate.from_xy(*scaled, self.mu, self.gamma, LmiKind.HYPER)
        except np.linalg.LinAlgError:
            return None
        report = verify_hyper_lmi(cert, self.plant)
        if report.feasible and report.x_min >= self.delta and report.h_min >= self.delta:
            return cert
        return None

    def _result(self, cert: Optional[GainCertificate], objective: float, iterations: int,
                seeds_tried: int) -> SynthesisResult:
        if cert is None:
            return SynthesisResult(False, None, objective, iterations, seeds_tried)
        report = verify_hyper_lmi(cert, self.plant)
        return SynthesisResult(True, cert, objective, iterations, seeds_tried,
                               x_min=report.x_min, h_min=report.h_min)

    # ---- seeds -----------------------------------------------------------

    def seeds(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        """
        極配置 K と (A+BK+γH)X + X(A+BK+γH)ᵀ = −W の解 X から初期候補を作る

        A+BK+γH が Hurwitz なら LMI 左辺は −W になる
        """
        n = self.plant.n
        candidates = []
        for spread in POLE_SPREADS:
            for scale in POLE_SCALES:
                poles = -scale * (1.0 + spread * np.arange(n))
                K = chain_gain_from_poles(poles)
                shifted = self.plant.closed_loop(K) + self.gamma * self.H
                if np.max(np.linalg.eigvals(shifted).real) >= 0:
                    continue
                for W in (np.eye(n), self.H):
                    X = symmetrize(solve_continuous_lyapunov(shifted, -W))
                    if not np.all(np.isfinite(X)):
                        continue
                    candidates.append((X, K @ X))
        return candidates

    # ---- search ----------------------------------------------------------

    def synthesize(self, iterations: int = 300, seed: int = 0) -> SynthesisResult:
        seeds = self.seeds()
        for X, Y in seeds:
            cert = self._certificate(X, Y)
            if cert is not None:
                self.logger.print_success(f"✅ 初期候補で LMI を満たしました（γ={self.gamma:g}）")
                return self._result(cert, self.objective(X, Y), 0, len(seeds))

        if seeds:
            X, Y = min(seeds, key=lambda s: self.objective(*s))
        else:
            X, Y = np.eye(self.plant.n), np.zeros((1, self.plant.n))
        scale = np.linalg.norm(X, 'fro')
        X, Y = X / scale, Y / scale
        best = self.objective(X, Y)
        result = self._descend(X, Y, best, iterations, np.random.default_rng(seed))
        return self._result(result[0], result[1], result[2], len(seeds))

    def _descend(self, X: np.ndarray, Y: np.ndarray, best: float, iterations: int,
                 rng: np.random.Generator) -> Tuple[Optional[GainCertificate], float, int]:
        n = self.plant.n
        coords = [('X', i, j) for i in range(n) for j in range(i, n)] + [('Y', 0, j) for j in range(n)]
        step = 0.1

        for iteration in range(1, iterations + 1):
            improved = False
            for k in rng.permutation(len(coords)):
                name, i, j = coords[k]
                for sign in (1.0, -1.0):
                    X_try, Y_try = X.copy(), Y.copy()
                    if name == 'X':
                        X_try[i, j] += sign * step
                        X_try[j, i] = X_try[i, j]
                    else:
                        Y_try[i, j] += sign * step
                    value = self.objective(X_try, Y_try)
                    if value < best:
                        X, Y, best, improved = X_try, Y_try, value, True
                        break

            cert = self._certificate(X, Y)
            if cert is not None:
                self.logger.print_success(f"✅ {iteration} 反復で LMI を満たしました（φ={best:.3e}）")
                return cert, best, iteration
            if not improved:
                step *= 0.5
                if step < MIN_STEP:
                    break

        self.logger.print_warning(f"⚠️ 反復上限に達しました（φ={best:.3e}）")
        return None, best, iterations


def synthesize_gains(plant: PlantConfig, mu: float, gamma_target: float,
                     iterations: int = 300, seed: int = 0,
                     logger: Optional[ColorLogger] = None) -> SynthesisResult:
    """HyperLmi 証明書の探索（見つからなければ found=False）"""
    return GainSynthesizer(plant, mu, gamma_target, logger=logger).synthesize(iterations, seed)
