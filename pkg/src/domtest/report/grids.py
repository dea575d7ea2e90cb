"""
网格数据导出

每个坐标函数一个 CSV：坐标列在前，value 在后，行按网格下标字典序。
数值为 A 减 B 的原始差，供外部绘图使用
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger

from domtest.criteria.functions import CoordinateField
from domtest.data.model import EvaluationGrid
from domtest.edf.summary import EdfSummary

# 坐标名 -> 文件名片段
FILE_STEMS: dict[str, str] = {
    "F2(z)": "F2",
    "H2(z)": "H2",
    "F1(-x)": "F1_negx",
    "F1(x)+F1(-x)": "F1_sum",
    "F(-x,z)": "F_negx",
    "F(x,z)": "F_posx",
    "K(-x,z)": "K_negx",
    "K(x,z)": "K_posx",
    "H(-x,z)": "H_negx",
    "H(x,z)": "H_posx",
    "L(-x,z)": "L_negx",
    "L(x,z)": "L_posx",
    "S1(x1)-H1(-x2)-centered": "S1_H1_centered",
}


def field_frame(field: CoordinateField) -> pd.DataFrame:
    """坐标函数展开为长表"""
    mesh = np.meshgrid(*field.axes, indexing="ij")
    data = {name: axis.ravel() for name, axis in zip(field.domain.axis_names, mesh, strict=True)}
    data["value"] = field.values.ravel()
    return pd.DataFrame(data)


def _prefixed(prefix: str | Path, stem: str) -> Path:
    prefix = Path(prefix)
    return prefix.with_name(f"{prefix.name}_{stem}.csv")


def emit_grids(fields: Sequence[CoordinateField], path_prefix: str | Path) -> list[Path]:
    """
    导出一组坐标函数

    Args:
        fields: 坐标函数
        path_prefix: 路径前缀，文件为 {prefix}_{坐标}.csv

    Returns:
        写出的文件列表
    """
    paths = []
    for f in fields:
        path = _prefixed(path_prefix, FILE_STEMS.get(f.name, f.name))
        path.parent.mkdir(parents=True, exist_ok=True)
        field_frame(f).to_csv(path, index=False)
        paths.append(path)
    logger.debug(f"网格已导出: {len(paths)} 个文件, 前缀 {path_prefix}")
    return paths


def emit_distributions(
    edf_a: EdfSummary,
    edf_b: EdfSummary,
    grid: EvaluationGrid,
    path_prefix: str | Path,
    labels: tuple[str, str] = ("A", "B"),
) -> list[Path]:
    """
    导出两组的边际与联合经验分布

    - {prefix}_marginal_x.csv: x, F1_A, F1_B
    - {prefix}_marginal_z.csv: z, F2_A, F2_B
    - {prefix}_joint.csv: x, z, F_A, F_B, diff

    Args:
        edf_a: 样本 A 摘要
        edf_b: 样本 B 摘要
        grid: 评估网格
        path_prefix: 路径前缀
        labels: 两组标签（用于列名）

    Returns:
        写出的文件列表
    """
    la, lb = labels
    xs, zs = grid.x_points, grid.z_points

    marginal_x = pd.DataFrame({"x": xs, f"F1_{la}": edf_a.cdf1(xs), f"F1_{lb}": edf_b.cdf1(xs)})
    marginal_z = pd.DataFrame({"z": zs, f"F2_{la}": edf_a.cdf2(zs), f"F2_{lb}": edf_b.cdf2(zs)})

    fa = edf_a.joint_cdf_grid(xs, zs)
    fb = edf_b.joint_cdf_grid(xs, zs)
    gx, gz = np.meshgrid(xs, zs, indexing="ij")
    joint = pd.DataFrame({
        "x": gx.ravel(),
        "z": gz.ravel(),
        f"F_{la}": fa.ravel(),
        f"F_{lb}": fb.ravel(),
        "diff": (fa - fb).ravel(),
    })

    paths = []
    for stem, frame in (("marginal_x", marginal_x), ("marginal_z", marginal_z), ("joint", joint)):
        path = _prefixed(path_prefix, stem)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False)
        paths.append(path)
    logger.debug(f"分布数据已导出: {[str(p) for p in paths]}")
    return paths
