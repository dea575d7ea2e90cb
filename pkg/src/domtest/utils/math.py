"""
数学工具模块

检验与模拟中常用的小函数
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

# log log n 需要 n >= 3 才为正，这里留一点余量
MIN_CONTACT_N = 4


def positive_part(values: npt.ArrayLike) -> np.ndarray:
    """
    逐元素取正部 [v]+ = max(v, 0)

    Args:
        values: 数组

    Returns:
        正部数组
    """
    return np.maximum(np.asarray(values, dtype=float), 0.0)


def contact_threshold(n: int, scale: float = 4.0) -> float:
    """
    接触集阈值 c_n = scale * log(log n) / sqrt(n)

    Args:
        n: 合并样本量 n_A + n_B
        scale: 常数（默认 4）

    Returns:
        c_n
    """
    if n < MIN_CONTACT_N:
        raise ValueError(f"样本量过小: n={n}，接触集阈值至少需要 n >= {MIN_CONTACT_N}")
    return scale * math.log(math.log(n)) / math.sqrt(n)


def rejects(p_value: float, alpha: float) -> bool:
    """p <= alpha 时拒绝；alpha = 0 永不拒绝"""
    return alpha > 0 and p_value <= alpha


def mc_standard_error(rate: float, replications: int) -> float:
    """
    Monte Carlo 拒绝率的二项标准误

    Args:
        rate: 拒绝率
        replications: 重复次数

    Returns:
        sqrt(rate * (1 - rate) / replications)
    """
    if replications <= 0:
        return 0.0
    return math.sqrt(max(rate * (1.0 - rate), 0.0) / replications)


def binomial_upper_bound(alpha: float, replications: int, n_se: float = 3.0) -> float:
    """名义水平加 n_se 个二项标准误，用于检验水平控制"""
    return alpha + n_se * math.sqrt(alpha * (1.0 - alpha) / replications)


def is_nondecreasing(values: Sequence[float], tol: float = 0.0) -> bool:
    """序列是否（在容差内）单调不减"""
    return all(b >= a - tol for a, b in zip(values, values[1:], strict=False))
