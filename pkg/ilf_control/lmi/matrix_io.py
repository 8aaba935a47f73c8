#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
プレーンテキスト行列フォーマット
- 1行目: "n m"
- 続く n 行: m 個の空白区切り小数
証明書は X, Y, mu, gamma の名前付きセクションで書き出す
"""

from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from common.types import ConfigError
from .verifier import GainCertificate, LmiKind

PathLike = Union[str, Path]


def format_matrix(M: np.ndarray) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    lines = [f"{M.shape[0]} {M.shape[1]}"]
    lines += [" ".join(f"{v:.17g}" for v in row) for row in M]
    return "\n".join(lines) + "\n"


def parse_matrix(lines: List[str], source: str = "<text>") -> np.ndarray:
    rows = [line.split() for line in lines if line.strip() and not line.lstrip().startswith('#')]
    if not rows:
        raise ConfigError(f"行列データが空です: {source}")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        data = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)
    except (ValueError, IndexError) as e:
        raise ConfigError(f"行列の形式が不正です: {source}: {e}")
    if data.shape != (n, m):
        raise ConfigError(f"行列サイズがヘッダー {n}x{m} と一致しません: {source} {data.shape}")
    return data


def read_matrix(path: PathLike) -> np.ndarray:
    """行列ファイルを読み込む"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return parse_matrix(f.readlines(), str(path))
    except OSError as e:
        raise ConfigError(f"行列ファイルを読み込めません: {path}: {e}")


def write_matrix(path: PathLike, M: np.ndarray):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_matrix(M))


def format_certificate(cert: GainCertificate) -> str:
    value_name = 'gamma' if cert.which == LmiKind.HYPER else 'a'
    sections = [
        f"# {cert.which.value}",
        "[X]", format_matrix(cert.X).rstrip(),
        "[Y]", format_matrix(cert.Y).rstrip(),
        "[mu]", f"{cert.mu:.17g}",
        f"[{value_name}]", f"{cert.gamma_or_a:.17g}",
    ]
    return "\n".join(sections) + "\n"


def write_certificate(path: PathLike, cert: GainCertificate):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_certificate(cert))


def read_certificate(path: PathLike) -> GainCertificate:
    """write_certificate の出力を読み戻す"""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"証明書ファイルを読み込めません: {path}: {e}")

    sections: Dict[str, List[str]] = {}
    which = None
    current = None
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith('#'):
            which = stripped.lstrip('#').strip() or which
        elif stripped.startswith('[') and stripped.endswith(']'):
            current = stripped[1:-1]
            sections[current] = []
        elif current is not None and stripped:
            sections[current].append(stripped)

    try:
        kind = LmiKind(which)
        value_name = 'gamma' if kind == LmiKind.HYPER else 'a'
        X = parse_matrix(sections['X'], f"{path}[X]")
        Y = parse_matrix(sections['Y'], f"{path}[Y]")
        mu = float(sections['mu'][0])
        value = float(sections[value_name][0])
    except (KeyError, IndexError, ValueError) as e:
        raise ConfigError(f"証明書の形式が不正です: {path}: {e}")
    return GainCertificate.from_xy(X, Y, mu, value, kind)
