#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Experiments module
実験ランナーと成果物出力
"""

from .artifacts import ArtifactWriter, CheckResult
from .runner import ExperimentRunner, ExperimentOutcome

__all__ = [
    'ArtifactWriter',
    'CheckResult',
    'ExperimentRunner',
    'ExperimentOutcome',
]
