#!/usr/bin/env python3

# -*- coding: utf-8 -*-

"""

ConfigManager - 実験設定管理
- 実験IDごとのデフォルト設定（フラットな key: value）
- YAML上書きファイルの読み込み（metadata.yaml の config: セクションも可）
- 型チェック・未知キー検出（ConfigError）
- 実効設定のYAML出力（--print-config）

"""

import os
import copy
import yaml
from typing import List, Dict, Any, Optional
from .logger import ColorLogger
from .types import ConfigError

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'config', 'fixtures')

# ilf_control.control.HyperLaw の値
HYPER_LAWS = ('prefactored', 'plain')

_FIXTURES = {
    'fixture_p': os.path.join(FIXTURE_DIR, 'example1_P.txt'),
    'fixture_k': os.path.join(FIXTURE_DIR, 'example1_K.txt'),
}

EXPERIMENT_DEFAULTS: Dict[str, Dict[str, Any]] = {
    'fig1-rates': {
        'alphas': [1.0, 1.0, 1.0],
        't_max': 3.0,
        't_step': 0.01,
        'tolerance': 1e-12,
    },
    'comparison-ode': {
        'alphas': [1.0, 1.0],
        'y0': 1.0,
        'horizon': 3.0,
        'step': 1e-4,
        'tolerance': 1e-6,
    },
    'lmi-verify': {
        **_FIXTURES,
        'mu_finite': 0.5,
        'mu_hyper': 0.2,
        'search_tol': 1e-6,
        'synthesize': True,
        'synth_gamma': 0.05,
        'synth_iterations': 300,
        'seed': 0,
    },
    'ex1-sampled-finite-time': {
        **_FIXTURES,
        'mu': 0.5,
        'period': 1.0,
        'horizon': 15.0,
        'dt': 1e-3,
        'x0': [1.0, 0.0, 0.0],
        'v_min': 1e-5,
        'precision': 1e-12,
        'classify_windows': 4,
        'search_tol': 1e-6,
    },
    'ex2-hyper': {
        **_FIXTURES,
        'mu': 0.2,
        'horizon': 10.0,
        'dt': 1e-3,
        'x0': [1.0, 0.0, 0.0],
        'v_min': 1e-300,
        'finite_time_v_min': 1e-9,
        'precision': 1e-12,
        'classify_windows': 4,
    },
    'compare-noise': {
        **_FIXTURES,
        'mu': 0.2,
        'horizon': 10.0,
        'dt': 1e-3,
        'x0': [0.5, 0.0, 0.0],
        'noise_power': 1e-5,
        'noise_interval': 0.01,
        'seeds': 20,
        'seed': 0,
        'required_wins': 15,
        'residual_fraction': 0.2,
        'v_min': 1e-300,
        'finite_time_v_min': 1e-9,
        'precision': 1e-10,
        'hyper_law': 'plain',
    },
    'compare-delay': {
        **_FIXTURES,
        'mu': 0.2,
        'horizon': 10.0,
        'dt': 1e-3,
        'x0': [0.5, 0.0, 0.0],
        'delay_tau': 0.05,
        'bound_factor': 10.0,
        'residual_fraction': 0.2,
        'v_min': 1e-300,
        'finite_time_v_min': 1e-9,
        'precision': 1e-10,
        'hyper_law': 'plain',
    },
    'certify-conditions': {
        **_FIXTURES,
        'mu': 0.2,
        'samples': 500,
        'seed': 0,
        'radius_min': 1e-4,
        'radius_max': 1e2,
        'k_tolerance': 1e-6,
        'search_tol': 1e-6,
    },
}


class ConfigManager:
    """実験設定管理クラス"""

    def __init__(self, logger: Optional[ColorLogger] = None):
        self.logger = logger or ColorLogger(quiet=True)

    @staticmethod
    def experiment_ids() -> List[str]:
        return list(EXPERIMENT_DEFAULTS.keys())

    def get_defaults(self, experiment_id: str) -> Dict[str, Any]:
        """実験IDのデフォルト設定（コピー）"""
        if experiment_id not in EXPERIMENT_DEFAULTS:
            raise ConfigError(
                f"未知の実験ID '{experiment_id}'（有効: {', '.join(self.experiment_ids())}）"
            )
        return copy.deepcopy(EXPERIMENT_DEFAULTS[experiment_id])

    def load_experiment_config(self, experiment_id: str,
                               config_path: Optional[str] = None,
                               seed: Optional[int] = None) -> Dict[str, Any]:
        """デフォルト + 上書きファイル + --seed から実効設定を構築"""
        config = self.get_defaults(experiment_id)

        if config_path:
            self.logger.print_status(f"📋 設定ファイル読み込み: {config_path}")
            overrides = self.load_yaml(config_path)
            if isinstance(overrides.get('config'), dict):
                overrides = overrides['config']
            self._validate_overrides(experiment_id, config, overrides)
            config.update(overrides)

        if seed is not None:
            if 'seed' not in config:
                raise ConfigError(f"実験 '{experiment_id}' は seed を持ちません")
            config['seed'] = int(seed)

        self._validate_experiment_config(experiment_id, config)
        return config

    def _validate_overrides(self, experiment_id: str, defaults: Dict[str, Any], overrides: Dict[str, Any]):
        """上書き値の妥当性チェック（未知キー・型不一致）"""
        for key, value in overrides.items():
            if key not in defaults:
                raise ConfigError(f"実験 '{experiment_id}' に未知の設定キー '{key}' があります")
            expected = defaults[key]
            if isinstance(expected, bool):
                if not isinstance(value, bool):
                    raise ConfigError(f"設定キー '{key}' は真偽値が必要です: {value!r}")
            elif isinstance(expected, int):
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(f"設定キー '{key}' は整数が必要です: {value!r}")
            elif isinstance(expected, float):
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"設定キー '{key}' は数値が必要です: {value!r}")
                overrides[key] = float(value)
            elif isinstance(expected, list):
                if not isinstance(value, list) or not all(
                        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
                    raise ConfigError(f"設定キー '{key}' は数値リストが必要です: {value!r}")
                overrides[key] = [float(v) for v in value]
            elif isinstance(expected, str):
                if not isinstance(value, str):
                    raise ConfigError(f"設定キー '{key}' は文字列が必要です: {value!r}")

    def _validate_experiment_config(self, experiment_id: str, config: Dict[str, Any]):
        """値域チェック"""
        for key in ('dt', 'horizon', 'v_min', 'precision', 'period', 'step', 'y0',
                    'noise_power', 'noise_interval', 'search_tol', 'finite_time_v_min'):
            if key in config and not config[key] > 0:
                raise ConfigError(f"設定キー '{key}' は正の値が必要です: {config[key]}")
        for key in ('mu', 'mu_finite', 'mu_hyper'):
            if key in config and not 0 < config[key] <= 1:
                raise ConfigError(f"設定キー '{key}' は (0, 1] の範囲が必要です: {config[key]}")
        if 'delay_tau' in config and config['delay_tau'] < 0:
            raise ConfigError(f"delay_tau は非負が必要です: {config['delay_tau']}")
        if 'alphas' in config and (not config['alphas'] or min(config['alphas']) <= 0):
            raise ConfigError(f"alphas は正の値のリストが必要です: {config['alphas']}")
        if 'seeds' in config and config['seeds'] < 1:
            raise ConfigError(f"seeds は1以上が必要です: {config['seeds']}")
        if 'hyper_law' in config and config['hyper_law'] not in HYPER_LAWS:
            raise ConfigError(
                f"hyper_law は {', '.join(HYPER_LAWS)} のいずれかが必要です: {config['hyper_law']!r}")
        for key in ('fixture_p', 'fixture_k'):
            if key in config and not os.path.exists(config[key]):
                raise ConfigError(f"フィクスチャファイルが見つかりません: {config[key]}")

    def load_yaml(self, filepath: str) -> Dict[str, Any]:
        """YAML ファイル読み込み（絶対パス・相対パス対応）"""
        absolute_path = filepath if os.path.isabs(filepath) else os.path.abspath(filepath)

        if not os.path.exists(absolute_path):
            self.logger.print_error(f"❌ YAMLファイルが見つかりません: {filepath}")
            self.logger.print_error(f"  探索パス: {absolute_path}")
            raise ConfigError(f"YAMLファイルが見つかりません: {filepath}")

        try:
            with open(absolute_path, 'r', encoding='utf-8') as file:
                data = yaml.safe_load(file)
        except yaml.YAMLError as e:
            self.logger.print_error(f"❌ YAML解析エラー ({filepath}): {e}")
            raise ConfigError(f"YAML解析エラー ({filepath}): {e}")

        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"設定ファイルはマッピングである必要があります: {filepath}")
        self.logger.print_success(f"✅ YAML読み込み成功: {filepath}")
        return data

    @staticmethod
    def dump_config(config: Dict[str, Any]) -> str:
        """フラットYAMLとして出力"""
        return yaml.safe_dump(config, default_flow_style=None, sort_keys=True, allow_unicode=True)
