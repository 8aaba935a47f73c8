#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Common module for ILF control toolkit
共通機能モジュール（ロガー・タイマー・例外・設定管理）
"""

from .logger import ColorLogger
from .timer import ProcessTimer
from .types import (
    IlfControlError,
    ContractViolationError,
    DomainError,
    IntegrationFailureError,
    InsufficientDataError,
    IlfSolverError,
    MissingSampleError,
    ConfigError,
    DecayClass,
)
from .config_manager import ConfigManager

__all__ = [
    'ColorLogger',
    'ProcessTimer',
    'IlfControlError',
    'ContractViolationError',
    'DomainError',
    'IntegrationFailureError',
    'InsufficientDataError',
    'IlfSolverError',
    'MissingSampleError',
    'ConfigError',
    'DecayClass',
    'ConfigManager',
]
