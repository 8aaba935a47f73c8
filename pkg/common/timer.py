#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ProcessTimer - 処理時間計測クラス
実験1回分の総時間とフェーズ別時間（計算・成果物書き出しなど）を計測する
"""

import time
from contextlib import contextmanager
from typing import Dict, Iterator, Optional


class ProcessTimer:
    """処理時間計測クラス"""

    def __init__(self, logger):
        self.logger = logger
        self.start_time: Optional[float] = None
        self.process_name = "処理"
        self.phase_times: Dict[str, float] = {}

    def start(self, process_name: str = "処理"):
        self.start_time = time.perf_counter()
        self.process_name = process_name
        self.phase_times = {}

    @contextmanager
    def phase(self, phase_name: str) -> Iterator[None]:
        """with ブロックの所要時間をフェーズとして加算記録"""
        begin = time.perf_counter()
        try:
            yield
        finally:
            spent = time.perf_counter() - begin
            self.phase_times[phase_name] = self.phase_times.get(phase_name, 0.0) + spent

    def elapsed(self) -> float:
        if self.start_time is None:
            return 0.0
        return time.perf_counter() - self.start_time

    def end_and_report(self) -> float:
        """総時間とフェーズ別時間を表示して総時間（秒）を返す"""
        if self.start_time is None:
            return 0.0

        total = self.elapsed()
        self.logger.print_timing(f"⏱️ {self.process_name} 完了: {self.format_duration(total)}")
        for name, spent in self.phase_times.items():
            share = spent / total * 100.0 if total > 0 else 0.0
            self.logger.print_timing(f" └─ {name}: {self.format_duration(spent)} ({share:.0f}%)")
        self.start_time = None
        return total

    @staticmethod
    def format_duration(seconds: float) -> str:
        if seconds < 1:
            return f"{seconds * 1000:.0f}ms"
        if seconds < 60:
            return f"{seconds:.2f}秒"
        minutes, secs = divmod(seconds, 60)
        if minutes < 60:
            return f"{int(minutes)}分{secs:.1f}秒"
        hours, minutes = divmod(int(minutes), 60)
        return f"{hours}時間{minutes}分{secs:.1f}秒"
