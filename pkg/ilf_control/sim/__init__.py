#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Simulation module
固定ステップ閉ループ積分・計測ノイズ・入力遅延
"""

from .noise import NoiseConfig, MeasurementNoise, apply_noise
from .delay import DelayLine, delay_line
from .integrator import SimConfig, Trajectory, rk4_step, ClosedLoopSimulator, integrate

__all__ = [
    'NoiseConfig',
    'MeasurementNoise',
    'apply_noise',
    'DelayLine',
    'delay_line',
    'SimConfig',
    'Trajectory',
    'rk4_step',
    'ClosedLoopSimulator',
    'integrate',
]
