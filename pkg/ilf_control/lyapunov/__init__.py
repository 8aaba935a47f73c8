#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Lyapunov module
拡大・ILF候補・二分法ソルバー・条件サンプラー
"""

from .dilation import Dilation, DilationKind, dilation_matrix, varrho, varrho_derivative
from .candidates import IlfCandidate, IlfVariant, q_eval, dq_dv, dq_dx
from .solver import IlfBisectionSolver, SolveResult, solve_ilf_bisection, merged_v
from .conditions import (
    ConditionId,
    ConditionReport,
    NestedLevel,
    shell_samples,
    check_c4_c5,
    check_differential_conditions,
    check_norm_bounds,
    beta_rate_margin,
    nested_level_diagnostics,
    nested_levels_report,
    estimate_alpha1,
    quadratic_decay_rate,
    linear_field,
)

__all__ = [
    'Dilation',
    'DilationKind',
    'dilation_matrix',
    'varrho',
    'varrho_derivative',
    'IlfCandidate',
    'IlfVariant',
    'q_eval',
    'dq_dv',
    'dq_dx',
    'IlfBisectionSolver',
    'SolveResult',
    'solve_ilf_bisection',
    'merged_v',
    'ConditionId',
    'ConditionReport',
    'NestedLevel',
    'shell_samples',
    'check_c4_c5',
    'check_differential_conditions',
    'check_norm_bounds',
    'beta_rate_margin',
    'nested_level_diagnostics',
    'nested_levels_report',
    'estimate_alpha1',
    'quadratic_decay_rate',
    'linear_field',
]
