#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
LMI module
プラント構築・固有値計算・LMI検証・ゲイン合成
"""

from .plant import PlantConfig, build_chain, chain_gain_from_poles
from .eigen import sym_eigs, symmetrize, lambda_min, lambda_max, sym_sqrt
from .verifier import (
    LmiKind,
    GainCertificate,
    VerificationReport,
    SearchResult,
    lmi_margins,
    verify_finite_time_lmi,
    verify_hyper_lmi,
    max_gamma_search,
    max_decay_search,
)
from .synthesis import GainSynthesizer, SynthesisResult, synthesize_gains
from .matrix_io import read_matrix, write_matrix, write_certificate, read_certificate

__all__ = [
    'PlantConfig',
    'build_chain',
    'chain_gain_from_poles',
    'sym_eigs',
    'symmetrize',
    'lambda_min',
    'lambda_max',
    'sym_sqrt',
    'LmiKind',
    'GainCertificate',
    'VerificationReport',
    'SearchResult',
    'lmi_margins',
    'verify_finite_time_lmi',
    'verify_hyper_lmi',
    'max_gamma_search',
    'max_decay_search',
    'GainSynthesizer',
    'SynthesisResult',
    'synthesize_gains',
    'read_matrix',
    'write_matrix',
    'write_certificate',
    'read_certificate',
]
