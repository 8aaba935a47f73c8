#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ILF Control Main Entry Point

使用方法:
  python3 -m ilf_control.main run <experiment-id> [--config FILE] [--out DIR] [--seed N] [--print-config]

終了コード: 0 成功 / 1 受け入れチェック失敗 / 2 設定エラー / 3 数値計算エラー
"""

import argparse
import sys
from typing import List, Optional

import numpy as np

from common.config_manager import ConfigManager
from common.logger import ColorLogger
from common.types import ConfigError, IlfControlError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ilf_control",
        description="ILF finite-time / hyperexponential control experiments",
    )
    sub = parser.add_subparsers(dest="command")
    run = sub.add_parser("run", help="実験を実行")
    run.add_argument("experiment", choices=ConfigManager.experiment_ids(), metavar="experiment-id",
                     help=f"実験ID ({', '.join(ConfigManager.experiment_ids())})")
    run.add_argument("--config", help="上書き設定 YAML（metadata.yaml も可）")
    run.add_argument("--out", help="出力ディレクトリ（既定: results/<experiment-id>）")
    run.add_argument("--seed", type=int, help="乱数シード")
    run.add_argument("--print-config", action="store_true", help="実効設定を表示して終了")
    return parser


def run_command(args: argparse.Namespace, logger: ColorLogger) -> int:
    from ilf_control.experiments.runner import ExperimentRunner

    config_manager = ConfigManager(logger)
    try:
        config = config_manager.load_experiment_config(args.experiment, args.config, args.seed)
    except ConfigError as e:
        logger.print_error(f"❌ 設定エラー: {e}")
        return EXIT_CONFIG_ERROR

    if args.print_config:
        print(ConfigManager.dump_config(config), end="")
        return EXIT_OK

    runner = ExperimentRunner(config_manager, logger)
    try:
        with np.errstate(over='ignore', under='ignore'):
            outcome = runner.run(args.experiment, config, args.out)
    except ConfigError as e:
        logger.print_error(f"❌ 設定エラー: {e}")
        return EXIT_CONFIG_ERROR
    except (IlfControlError, FloatingPointError, np.linalg.LinAlgError) as e:
        logger.print_error(f"❌ 数値計算エラー: {e}")
        return EXIT_NUMERICAL_FAILURE

    if outcome.passed:
        logger.print_success(f"🎉 全チェック成功: {outcome.out_dir}")
    else:
        logger.print_error(f"❌ 受け入れチェック失敗: {outcome.out_dir}")
    return outcome.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """メインエントリーポイント"""
    parser = build_parser()
    args = parser.parse_args(argv)
    logger = ColorLogger()

    if args.command != "run":
        parser.print_help()
        return EXIT_CONFIG_ERROR

    try:
        return run_command(args, logger)
    except KeyboardInterrupt:
        logger.print_warning("\n🛑 処理を中断しました")
        return EXIT_NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
