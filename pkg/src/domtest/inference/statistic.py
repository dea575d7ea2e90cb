"""
检验统计量与接触集

T = ‖[g]+‖，L2 范数按格点权重（各轴间距之积）加权，
网格加密时 T 近似不变
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from loguru import logger

from domtest.criteria.functions import CoordinateField
from domtest.errors import DataError
from domtest.utils.math import MIN_CONTACT_N, contact_threshold, positive_part


@dataclass(frozen=True)
class StatisticValue:
    """统计量取值及各坐标的贡献（平方积分）"""

    t: float
    per_coordinate: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class ContactMask:
    """
    接触集估计 χ = I(|ĝ| <= c_n)

    masks 与各坐标数组同形状
    """

    masks: dict[str, np.ndarray]
    c_n: float

    @property
    def fraction_active(self) -> float:
        """接触集格点占比"""
        total = sum(m.size for m in self.masks.values())
        if total == 0:
            return 0.0
        return sum(int(m.sum()) for m in self.masks.values()) / total


def _check_fields(fields: Sequence[CoordinateField]) -> None:
    if not fields:
        raise ValueError("坐标函数列表为空")
    for f in fields:
        if not np.all(np.isfinite(f.values)):
            raise ValueError(f"坐标 {f.name} 含非有限值")


def statistic(fields: Sequence[CoordinateField]) -> StatisticValue:
    """
    T = sqrt(Σ_坐标 Σ_格点 w·[g]+²)

    Args:
        fields: 检验函数各坐标

    Returns:
        StatisticValue
    """
    _check_fields(fields)
    per: dict[str, float] = {}
    for f in fields:
        pos = positive_part(f.values)
        per[f.name] = float(np.sum(f.weights * pos * pos))
    return StatisticValue(t=math.sqrt(sum(per.values())), per_coordinate=per)


def contact_set(
    fields: Sequence[CoordinateField],
    n: int,
    scale: float = 4.0,
) -> ContactMask:
    """
    估计接触集

    Args:
        fields: 样本检验函数 ĝ
        n: 合并样本量 n_A + n_B
        scale: c_n 常数

    Returns:
        ContactMask
    """
    if n < MIN_CONTACT_N:
        raise DataError(f"合并样本量 n={n} 过小，接触集估计至少需要 n >= {MIN_CONTACT_N}")
    c_n = contact_threshold(n, scale)
    masks = {f.name: np.abs(f.values) <= c_n for f in fields}
    mask = ContactMask(masks=masks, c_n=c_n)
    logger.debug(f"接触集: c_n={c_n:.4g}, 占比={mask.fraction_active:.3f}")
    return mask


def masked_statistic(
    star_values: dict[str, np.ndarray],
    fields: Sequence[CoordinateField],
    mask: ContactMask,
) -> float:
    """
    bootstrap 统计量 T* = ‖[(g* - ĝ)·χ]+‖

    接触集外的格点贡献恰为 0

    Args:
        star_values: 重抽样检验函数 g*，按坐标名
        fields: 样本检验函数 ĝ（提供权重）
        mask: 接触集

    Returns:
        T*
    """
    total = 0.0
    for f in fields:
        diff = positive_part(star_values[f.name] - f.values)
        diff = np.where(mask.masks[f.name], diff, 0.0)
        total += float(np.sum(f.weights * diff * diff))
    return math.sqrt(total)
