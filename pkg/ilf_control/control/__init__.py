#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Control module
ILF制御則とサンプル時刻実現
"""

from .laws import (
    ControllerVariant,
    HyperLaw,
    Branch,
    Sampling,
    ControllerSpec,
    ControlValue,
    u_linear,
    u_finite_time,
    u_hyper,
    u_combined,
    control_law,
)
from .sampled import LedgerEntry, IlfController, ledger_frame, sampled_controller

__all__ = [
    'ControllerVariant',
    'HyperLaw',
    'Branch',
    'Sampling',
    'ControllerSpec',
    'ControlValue',
    'u_linear',
    'u_finite_time',
    'u_hyper',
    'u_combined',
    'control_law',
    'LedgerEntry',
    'IlfController',
    'ledger_frame',
    'sampled_controller',
]
