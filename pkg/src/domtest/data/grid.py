"""
支撑集与评估网格构造
"""

from __future__ import annotations

import numpy as np
from loguru import logger

from domtest.data.model import EvaluationGrid, PolicySample, SupportBox
from domtest.errors import DataError


def pooled_support(a: PolicySample, b: PolicySample) -> SupportBox:
    """
    两组样本合并后的逐维最小/最大值

    Args:
        a: 样本 A
        b: 样本 B

    Returns:
        SupportBox
    """
    return SupportBox(
        x_min=float(min(a.x.min(), b.x.min())),
        x_max=float(max(a.x.max(), b.x.max())),
        z_min=float(min(a.z.min(), b.z.min())),
        z_max=float(max(a.z.max(), b.z.max())),
    )


def build_grid(box: SupportBox, g_x: int = 100, g_z: int = 50) -> EvaluationGrid:
    """
    在支撑矩形上构造等距评估网格

    Args:
        box: 合并支撑矩形
        g_x: 变化维点数
        g_z: 水平维点数

    Returns:
        EvaluationGrid
    """
    if g_x < 2 or g_z < 2:
        raise DataError(f"网格点数至少为 2: g_x={g_x}, g_z={g_z}")
    if box.degenerate:
        raise DataError(f"支撑矩形退化（某一维宽度为 0），无法构造网格: {box.to_dict()}")

    x_points = np.linspace(box.x_min, box.x_max, g_x)
    z_points = np.linspace(box.z_min, box.z_max, g_z)

    # ±m 都落在支撑内或在边缘外侧（CDF 在支撑外为常数，截断是精确的）
    m_max = max(abs(box.x_min), box.x_max)
    x_pos_points = np.linspace(0.0, m_max, g_x)

    grid = EvaluationGrid(
        box=box,
        x_points=x_points,
        z_points=z_points,
        x_pos_points=x_pos_points,
        dx=(box.x_max - box.x_min) / (g_x - 1),
        dz=(box.z_max - box.z_min) / (g_z - 1),
        dm=m_max / (g_x - 1),
    )
    logger.debug(f"评估网格: {g_x}×{g_z}, dx={grid.dx:.4g}, dz={grid.dz:.4g}, dm={grid.dm:.4g}")
    return grid
