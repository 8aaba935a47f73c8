#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Symmetric eigenvalue solver
巡回Jacobi法による対称行列の固有値計算
"""

import math
from typing import Tuple, Union

import numpy as np

from common.types import ContractViolationError, DomainError

DEFAULT_EIG_TOL = 1e-12
MAX_SWEEPS = 100


def _off_norm(A: np.ndarray) -> float:
    return math.sqrt(max(float(np.sum(A * A) - np.sum(np.diag(A) ** 2)), 0.0))


def symmetrize(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + M.T)


def sym_eigs(M: np.ndarray, tol: float = DEFAULT_EIG_TOL,
             return_vectors: bool = False) -> Union[np.ndarray, Tuple[np.ndarray, np.ndarray]]:
    """
    対称行列の固有値（昇順）

    Args:
        M: 対称 n×n 行列
        tol: 対称性の許容誤差 / 非対角ノルムの収束判定（‖M‖ 相対）
        return_vectors: True の場合 (固有値, 固有ベクトル列) を返す
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractViolationError(f"正方行列が必要です: shape={A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("行列に非有限値が含まれます")

    n = A.shape[0]
    inf_norm = float(np.max(np.sum(np.abs(A), axis=1))) if n else 0.0
    asym = float(np.max(np.sum(np.abs(A - A.T), axis=1))) if n else 0.0
    if asym > tol * inf_norm:
        raise DomainError(f"非対称な行列です: ‖M−Mᵀ‖∞={asym:.3e}")

    A = 0.5 * (A + A.T)
    V = np.eye(n)
    threshold = tol * float(np.linalg.norm(A, 'fro'))

    for _ in range(MAX_SWEEPS):
        if _off_norm(A) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                a_pq = A[p, q]
                if a_pq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * a_pq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0

                vec_p, vec_q = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vec_p - s * vec_q
                V[:, q] = s * vec_p + c * vec_q

    eigenvalues = np.diag(A).copy()
    order = np.argsort(eigenvalues)
    if return_vectors:
        return eigenvalues[order], V[:, order]
    return eigenvalues[order]


def lambda_min(M: np.ndarray) -> float:
    return float(sym_eigs(symmetrize(M))[0])


def lambda_max(M: np.ndarray) -> float:
    return float(sym_eigs(symmetrize(M))[-1])


def sym_sqrt(M: np.ndarray) -> np.ndarray:
    """正定値行列の対称平方根"""
    values, vectors = sym_eigs(symmetrize(M), return_vectors=True)
    if values[0] <= 0:
        raise DomainError(f"正定値ではありません: λ_min={values[0]:.3e}")
    return (vectors * np.sqrt(values)) @ vectors.T
