#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ILF Control Package
陰的リアプノフ関数による有限時間・超指数制御ツールキット
"""

__version__ = "1.0"

# サブパッケージは個別に import する
__all__ = []
