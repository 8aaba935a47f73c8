#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
DelayLine - 制御チャネルの整数ステップ遅延（初期履歴はゼロ）
"""

from collections import deque

from common.types import ContractViolationError


class DelayLine:
    """push(u(t)) が u(t − capacity·dt) を返す"""

    def __init__(self, capacity: int):
        if capacity < 0:
            raise ContractViolationError(f"遅延容量は非負が必要です: {capacity}")
        self.capacity = int(capacity)
        self._buffer = deque([0.0] * self.capacity)

    def push(self, u: float) -> float:
        if self.capacity == 0:
            return u
        self._buffer.append(u)
        return self._buffer.popleft()


def delay_line(capacity: int) -> DelayLine:
    return DelayLine(capacity)
