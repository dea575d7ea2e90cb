"""
检验函数模块

每个准则对应一组坐标函数 gᵏ(F)，检验函数 g = gᵏ(F_A) - gᵏ(F_B)。
g <= 0 处处成立即原假设 A ≿ B 成立。

坐标只在其真正依赖的变量上取值：
- z_axis: F²(z) / H²(z)，长度 G_z
- neg_x_axis / pos_x_axis: F¹(-m) / F¹(m)+F¹(-m)，长度 G_x
- xz_plane_negx / xz_plane_posx: 联合函数在 (∓m, z)，去掉最上方的 m 与 z
- x1x2_quadrant: S¹/H¹ 中心化坐标，G_x × G_x
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import Enum

import numpy as np
from loguru import logger

from domtest.data.model import Criterion, EvaluationGrid
from domtest.edf.summary import EdfSummary
from domtest.errors import GridMismatchError


class Domain(str, Enum):
    """坐标函数的定义域"""

    Z_AXIS = "z_axis"
    NEG_X_AXIS = "neg_x_axis"
    POS_X_AXIS = "pos_x_axis"
    XZ_PLANE_NEGX = "xz_plane_negx"
    XZ_PLANE_POSX = "xz_plane_posx"
    X1X2_QUADRANT = "x1x2_quadrant"

    def shape(self, g_x: int, g_z: int) -> tuple[int, ...]:
        """该定义域在 G_x × G_z 网格下的数组形状"""
        if self is Domain.Z_AXIS:
            return (g_z,)
        if self in (Domain.NEG_X_AXIS, Domain.POS_X_AXIS):
            return (g_x,)
        if self is Domain.X1X2_QUADRANT:
            return (g_x, g_x)
        return (g_x - 1, g_z - 1)

    @property
    def axis_names(self) -> tuple[str, ...]:
        """输出 CSV 的坐标列名"""
        if self is Domain.Z_AXIS:
            return ("z",)
        if self in (Domain.NEG_X_AXIS, Domain.POS_X_AXIS):
            return ("x",)
        if self is Domain.X1X2_QUADRANT:
            return ("x1", "x2")
        return ("x", "z")

    def axes(self, grid: EvaluationGrid) -> tuple[np.ndarray, ...]:
        """坐标轴取值（x 方向为幅度 m >= 0）"""
        if self is Domain.Z_AXIS:
            return (grid.z_points,)
        if self in (Domain.NEG_X_AXIS, Domain.POS_X_AXIS):
            return (grid.x_pos_points,)
        if self is Domain.X1X2_QUADRANT:
            return (grid.x_pos_points, grid.x_pos_points)
        return (grid.plane_m, grid.plane_z)

    def cell_weight(self, grid: EvaluationGrid) -> float:
        """每个格点的积分权重（各轴间距之积）"""
        if self is Domain.Z_AXIS:
            return grid.dz
        if self in (Domain.NEG_X_AXIS, Domain.POS_X_AXIS):
            return grid.dm
        if self is Domain.X1X2_QUADRANT:
            return grid.dm * grid.dm
        return grid.dm * grid.dz


@dataclass(frozen=True, eq=False)
class CoordinateField:
    """
    单个坐标函数在其定义域网格上的取值

    values 为 A 值减 B 值；weights 与 values 同形状
    """

    name: str
    domain: Domain
    values: np.ndarray
    weights: np.ndarray
    axes: tuple[np.ndarray, ...]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.values.shape)


# 坐标名 -> 定义域
COORDINATE_DOMAINS: dict[str, Domain] = {
    "F2(z)": Domain.Z_AXIS,
    "H2(z)": Domain.Z_AXIS,
    "F1(-x)": Domain.NEG_X_AXIS,
    "F1(x)+F1(-x)": Domain.POS_X_AXIS,
    "F(-x,z)": Domain.XZ_PLANE_NEGX,
    "F(x,z)": Domain.XZ_PLANE_POSX,
    "K(-x,z)": Domain.XZ_PLANE_NEGX,
    "K(x,z)": Domain.XZ_PLANE_POSX,
    "H(-x,z)": Domain.XZ_PLANE_NEGX,
    "H(x,z)": Domain.XZ_PLANE_POSX,
    "L(-x,z)": Domain.XZ_PLANE_NEGX,
    "L(x,z)": Domain.XZ_PLANE_POSX,
    "S1(x1)-H1(-x2)-centered": Domain.X1X2_QUADRANT,
}

_GAIN_LOSS = ["F1(-x)", "F1(x)+F1(-x)"]

# 准则 -> 坐标列表（顺序即报告顺序）
COORDINATES: dict[Criterion, list[str]] = {
    Criterion.LASBD: ["F2(z)", "F(-x,z)", "F(x,z)", *_GAIN_LOSS],
    # 第五坐标与 LASBD 相同，取 F¹(x)+F¹(-x)
    Criterion.LASBD2: ["F2(z)", "K(-x,z)", "K(x,z)", *_GAIN_LOSS],
    Criterion.IASD: ["H2(z)", "H(-x,z)", "H(x,z)", "S1(x1)-H1(-x2)-centered"],
    Criterion.IASD2: ["H2(z)", "L(-x,z)", "L(x,z)", "S1(x1)-H1(-x2)-centered"],
    Criterion.LIASD: ["H2(z)", "H(-x,z)", "H(x,z)", *_GAIN_LOSS],
    Criterion.LIASD2: ["H2(z)", "L(-x,z)", "L(x,z)", *_GAIN_LOSS],
    Criterion.KR_ADDITIVE: ["F2(z)", *_GAIN_LOSS],
}


def coordinate_domains(
    kind: Criterion,
    g_x: int = 100,
    g_z: int = 50,
) -> list[tuple[str, Domain, tuple[int, ...]]]:
    """
    准则的静态坐标描述

    Args:
        kind: 准则
        g_x: 变化维网格点数
        g_z: 水平维网格点数

    Returns:
        [(坐标名, 定义域, 数组形状), ...]
    """
    out = []
    for name in COORDINATES[Criterion(kind)]:
        domain = COORDINATE_DOMAINS[name]
        out.append((name, domain, domain.shape(g_x, g_z)))
    return out


class _ArmCoordinates:
    """
    单组样本的坐标取值缓存

    多个准则共用的坐标（如 F²、F¹(-m)）只计算一次
    """

    def __init__(self, edf: EdfSummary, grid: EvaluationGrid) -> None:
        self.edf = edf
        self.grid = grid
        self._cache: dict[str, np.ndarray] = {}
        m = grid.x_pos_points
        pm, pz = grid.plane_m, grid.plane_z
        self._builders: dict[str, Callable[[], np.ndarray]] = {
            "F2(z)": lambda: np.asarray(edf.cdf2(grid.z_points)),
            "H2(z)": lambda: np.asarray(edf.h2(grid.z_points)),
            "F1(-x)": lambda: np.asarray(edf.cdf1(-m)),
            "F1(x)+F1(-x)": lambda: np.asarray(edf.cdf1(m)) + np.asarray(edf.cdf1(-m)),
            "F(-x,z)": lambda: edf.joint_cdf_grid(-pm, pz),
            "F(x,z)": lambda: edf.joint_cdf_grid(pm, pz),
            "K(-x,z)": lambda: self._k_plane(-pm, "F(-x,z)"),
            "K(x,z)": lambda: self._k_plane(pm, "F(x,z)"),
            "H(-x,z)": lambda: edf.h_joint_grid(-pm, pz),
            "H(x,z)": lambda: edf.h_joint_grid(pm, pz),
            "L(-x,z)": lambda: edf.l_joint_grid(-pm, pz),
            "L(x,z)": lambda: edf.l_joint_grid(pm, pz),
            "S1(x1)-H1(-x2)-centered": self._centered_gain_loss,
        }

    def get(self, name: str) -> np.ndarray:
        if name not in self._cache:
            self._cache[name] = self._builders[name]()
        return self._cache[name]

    def _k_plane(self, xs: np.ndarray, joint_name: str) -> np.ndarray:
        f1 = np.asarray(self.edf.cdf1(xs))[:, None]
        f2 = np.asarray(self.edf.cdf2(self.grid.plane_z))[None, :]
        return f1 + f2 - self.get(joint_name)

    def _centered_gain_loss(self) -> np.ndarray:
        # 每个分量单独减去在 0 处的值，(0, 0) 处精确为 0
        m = self.grid.x_pos_points
        gain = np.asarray(self.edf.s1(m)) - float(self.edf.s1(0.0))
        loss = np.asarray(self.edf.h1(-m)) - float(self.edf.h1(0.0))
        return gain[:, None] - loss[None, :]


def _check_alignment(edf_a: EdfSummary, edf_b: EdfSummary, grid: EvaluationGrid) -> None:
    box = grid.box
    for label, edf in (("A", edf_a), ("B", edf_b)):
        if edf.origin_x != box.x_min or edf.origin_z != box.z_min:
            raise GridMismatchError(
                f"样本 {label} 的积分原点 ({edf.origin_x}, {edf.origin_z}) "
                f"与网格支撑下界 ({box.x_min}, {box.z_min}) 不一致"
            )


class CriteriaEvaluator:
    """
    在固定网格上对一对样本计算多个准则的检验函数

    bootstrap 中每次重抽样新建一个实例，实例内部缓存共享坐标
    """

    def __init__(self, edf_a: EdfSummary, edf_b: EdfSummary, grid: EvaluationGrid) -> None:
        _check_alignment(edf_a, edf_b, grid)
        self.grid = grid
        self._a = _ArmCoordinates(edf_a, grid)
        self._b = _ArmCoordinates(edf_b, grid)

    def difference(self, name: str) -> np.ndarray:
        """坐标 name 的 A 值减 B 值"""
        return self._a.get(name) - self._b.get(name)

    def fields(self, kind: Criterion) -> list[CoordinateField]:
        out = []
        for name in COORDINATES[Criterion(kind)]:
            domain = COORDINATE_DOMAINS[name]
            values = self.difference(name)
            out.append(
                CoordinateField(
                    name=name,
                    domain=domain,
                    values=values,
                    weights=np.full(values.shape, domain.cell_weight(self.grid)),
                    axes=domain.axes(self.grid),
                )
            )
        return out


def evaluate_g(
    kind: Criterion,
    edf_a: EdfSummary,
    edf_b: EdfSummary,
    grid: EvaluationGrid,
) -> list[CoordinateField]:
    """
    计算准则 kind 的检验函数 g = gᵏ(F_A) - gᵏ(F_B)

    Args:
        kind: 准则
        edf_a: 样本 A 摘要
        edf_b: 样本 B 摘要
        grid: 评估网格（两组共用）

    Returns:
        坐标函数列表
    """
    return CriteriaEvaluator(edf_a, edf_b, grid).fields(kind)


def evaluate_many(
    kinds: Iterable[Criterion],
    edf_a: EdfSummary,
    edf_b: EdfSummary,
    grid: EvaluationGrid,
) -> dict[Criterion, list[CoordinateField]]:
    """多个准则共用一次坐标计算"""
    evaluator = CriteriaEvaluator(edf_a, edf_b, grid)
    result = {Criterion(k): evaluator.fields(k) for k in kinds}
    logger.debug(f"检验函数已计算: {[k.value for k in result]}")
    return result
