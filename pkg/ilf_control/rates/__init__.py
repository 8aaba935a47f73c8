#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Rates module
入れ子指数レート関数・比較方程式・減衰分類モジュール
"""

from .ratefn import (
    RateProfile,
    DecayThresholds,
    DecayReport,
    rho,
    sigma,
    sigma_product,
    envelope,
    integrate_comparison,
    monotone_fraction,
    classify_decay,
    reference_curves,
    select_global_rate,
    norm_envelope_bound,
    REFERENCE_PROFILE,
    FTS_END,
)

__all__ = [
    'RateProfile',
    'DecayThresholds',
    'DecayReport',
    'rho',
    'sigma',
    'sigma_product',
    'envelope',
    'integrate_comparison',
    'monotone_fraction',
    'classify_decay',
    'reference_curves',
    'select_global_rate',
    'norm_envelope_bound',
    'REFERENCE_PROFILE',
    'FTS_END',
]
