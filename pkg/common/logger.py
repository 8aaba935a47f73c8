#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ColorLogger - 全ツール共通のカラー出力ロガー
- print_status / print_success / print_warning / print_error / print_stage / print_timing
- quiet モード: 警告・エラー以外を抑制（ライブラリ利用・テスト用）
- history: 出力したメッセージの記録（サマリー・テストで参照）
"""

from typing import List, Tuple


class ColorLogger:
    """ANSIカラー付きレベル別ロガー"""

    def __init__(self, quiet: bool = False):
        self.GREEN = '\033[0;32m'
        self.YELLOW = '\033[0;33m'
        self.RED = '\033[0;31m'
        self.BLUE = '\033[0;34m'
        self.CYAN = '\033[0;36m'
        self.MAGENTA = '\033[0;35m'
        self.NC = '\033[0m'  # No Color
        self.quiet = quiet
        self.history: List[Tuple[str, str]] = []

    def _emit(self, level: str, color: str, message: str, always: bool = False):
        self.history.append((level, message))
        if self.quiet and not always:
            return
        print(f"{color}[{level}]{self.NC} {message}")

    def print_status(self, message):
        """[INFO] メッセージ（青色）"""
        self._emit("INFO", self.BLUE, message)

    def print_success(self, message):
        """[SUCCESS] メッセージ（緑色）"""
        self._emit("SUCCESS", self.GREEN, message)

    def print_warning(self, message):
        """[WARNING] メッセージ（黄色）"""
        self._emit("WARNING", self.YELLOW, message, always=True)

    def print_error(self, message):
        """[ERROR] メッセージ（赤色）"""
        self._emit("ERROR", self.RED, message, always=True)

    def print_stage(self, message):
        """[STAGE] メッセージ（シアン色）"""
        self._emit("STAGE", self.CYAN, message)

    def print_timing(self, message):
        """[TIMING] メッセージ（マゼンタ色）"""
        self._emit("TIMING", self.MAGENTA, message)

    def messages(self, level: str) -> List[str]:
        """指定レベルの記録済みメッセージ一覧"""
        return [msg for lvl, msg in self.history if lvl == level]
