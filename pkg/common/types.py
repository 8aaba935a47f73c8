#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Common types and errors
共通例外クラスと列挙型定義
"""

from enum import Enum
from typing import Optional


class IlfControlError(Exception):
    """ILF制御ライブラリ共通エラー"""
    pass


class ContractViolationError(IlfControlError, ValueError):
    """事前条件違反（次元不一致・範囲外レベル・不正な行列など）"""
    pass


class DomainError(IlfControlError, ValueError):
    """定義域外の引数"""
    pass


class IntegrationFailureError(IlfControlError):
    """数値積分の破綻（発生時刻を保持）"""

    def __init__(self, message: str, time: Optional[float] = None):
        super().__init__(message if time is None else f"{message} (t={time:.6g})")
        self.time = time


class InsufficientDataError(IlfControlError):
    """データ不足（窓数・サンプル数）"""
    pass


class IlfSolverError(IlfControlError):
    """ILF二分法ソルバーの収束失敗"""
    pass


class MissingSampleError(IlfControlError):
    """軌道に指定時刻のサンプルが存在しない"""

    def __init__(self, time: float):
        super().__init__(f"軌道にサンプル時刻 t={time:.6g} が存在しません")
        self.time = time


class ConfigError(IlfControlError):
    """設定エラー（CLI終了コード2）"""
    pass


class DecayClass(str, Enum):
    """減衰率の分類"""
    EXPONENTIAL = "Exponential"
    HYPEREXPONENTIAL = "Hyperexponential"
    INCONCLUSIVE = "Inconclusive"
