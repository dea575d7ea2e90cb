"""
数据模型模块

定义检验所需的基础数据结构：
- Observation / PolicySample: 单户 (x, z) 观测与单个处理组样本
- SupportBox / EvaluationGrid: 合并支撑集与评估网格
- RunConfig: 一次检验运行的全部参数
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from domtest.errors import ConfigError, DataError


class Criterion(str, Enum):
    """占优准则"""

    LASBD = "lasbd"
    LASBD2 = "lasbd2"
    IASD = "iasd"
    IASD2 = "iasd2"
    LIASD = "liasd"
    LIASD2 = "liasd2"
    KR_ADDITIVE = "kr"

    @property
    def label(self) -> str:
        """报告中使用的名称"""
        return "KR-additive" if self is Criterion.KR_ADDITIVE else self.name

    @classmethod
    def main_six(cls) -> list[Criterion]:
        """文中检验的六个准则（不含可加形式）"""
        return [cls.LASBD, cls.LASBD2, cls.IASD, cls.IASD2, cls.LIASD, cls.LIASD2]


class Direction(str, Enum):
    """原假设方向"""

    A_OVER_B = "A_over_B"  # H0: A ≿ B
    B_OVER_A = "B_over_A"  # H0: B ≿ A
    BOTH = "both"

    def expand(self) -> list[Direction]:
        """展开为单方向列表"""
        if self is Direction.BOTH:
            return [Direction.A_OVER_B, Direction.B_OVER_A]
        return [self]

    @property
    def tag(self) -> int:
        """随机流标签"""
        return {Direction.A_OVER_B: 0, Direction.B_OVER_A: 1}[self]


@dataclass(frozen=True)
class Observation:
    """单户观测：x 为收入变化（对数），z 为收入水平（对数）"""

    x: float
    z: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.z)):
            raise DataError(f"观测值必须有限: x={self.x}, z={self.z}")


@dataclass(frozen=True, eq=False)
class PolicySample:
    """
    单个处理组样本

    x, z 以只读 numpy 数组保存，行序与输入一致
    """

    label: str
    x: np.ndarray
    z: np.ndarray

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=float)
        z = np.array(self.z, dtype=float)
        if x.ndim != 1 or x.shape != z.shape:
            raise DataError(f"{self.label}: x 与 z 必须是等长一维数组")
        if len(x) < 2:
            raise DataError(f"{self.label}: 每组至少需要 2 个观测，实际 {len(x)}")
        bad = ~(np.isfinite(x) & np.isfinite(z))
        if bad.any():
            raise DataError(f"{self.label}: 存在 NaN/无穷值", row=int(np.argmax(bad)))
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        """样本量"""
        return len(self.x)

    @property
    def observations(self) -> list[Observation]:
        """逐条观测"""
        return [Observation(float(a), float(b)) for a, b in zip(self.x, self.z, strict=True)]

    @classmethod
    def from_observations(cls, label: str, observations: list[Observation]) -> PolicySample:
        return cls(
            label=label,
            x=np.array([o.x for o in observations], dtype=float),
            z=np.array([o.z for o in observations], dtype=float),
        )

    def to_frame(self) -> pd.DataFrame:
        """转换为 DataFrame (treatment, x, z)"""
        return pd.DataFrame({"treatment": self.label, "x": self.x, "z": self.z})

    def __repr__(self) -> str:
        return f"PolicySample(label={self.label!r}, n={self.n})"


@dataclass(frozen=True)
class SupportBox:
    """两组样本合并后的支撑矩形"""

    x_min: float
    x_max: float
    z_min: float
    z_max: float

    def __post_init__(self) -> None:
        if self.x_min > self.x_max or self.z_min > self.z_max:
            raise DataError(f"支撑矩形上下界颠倒: {self}")

    @property
    def degenerate(self) -> bool:
        """某一维宽度为 0"""
        return self.x_min == self.x_max or self.z_min == self.z_max

    def contains(self, sample: PolicySample) -> bool:
        """样本是否全部落在矩形内"""
        return bool(
            sample.x.min() >= self.x_min
            and sample.x.max() <= self.x_max
            and sample.z.min() >= self.z_min
            and sample.z.max() <= self.z_max
        )

    def to_dict(self) -> dict[str, float]:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "z_min": self.z_min,
            "z_max": self.z_max,
        }


@dataclass(frozen=True, eq=False)
class EvaluationGrid:
    """
    评估网格

    x_points / z_points 覆盖合并支撑集；x_pos_points 是非负幅度 m，
    检验函数在 (+m) 与 (-m) 两处取值
    """

    box: SupportBox
    x_points: np.ndarray
    z_points: np.ndarray
    x_pos_points: np.ndarray
    dx: float
    dz: float
    dm: float

    # 联合坐标不含最上方的 x、z 网格点
    plane_m: np.ndarray = field(init=False)
    plane_z: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        for arr in (self.x_points, self.z_points, self.x_pos_points):
            arr.setflags(write=False)
        object.__setattr__(self, "plane_m", self.x_pos_points[:-1])
        object.__setattr__(self, "plane_z", self.z_points[:-1])

    @property
    def g_x(self) -> int:
        return len(self.x_points)

    @property
    def g_z(self) -> int:
        return len(self.z_points)

    def to_dict(self) -> dict[str, Any]:
        return {
            "box": self.box.to_dict(),
            "g_x": self.g_x,
            "g_z": self.g_z,
            "dx": self.dx,
            "dz": self.dz,
            "dm": self.dm,
        }


class RunConfig(BaseModel):
    """检验运行配置"""

    model_config = ConfigDict(frozen=True, extra="ignore")

    criteria: list[Criterion] = Field(default_factory=Criterion.main_six, description="检验准则")
    direction: Direction = Field(default=Direction.BOTH, description="原假设方向")
    reps: int = Field(default=999, ge=1, description="bootstrap 重复次数 R")
    seed: int = Field(default=0, ge=0, lt=2**64, description="随机种子")
    eta: float = Field(default=1e-6, gt=0, description="p 值并列打破常数 η")
    contact_scale: float = Field(default=4.0, gt=0, description="c_n = scale·log log n / √n")
    grid_x: int = Field(default=100, ge=2, description="变化维网格点数 G_x")
    grid_z: int = Field(default=50, ge=2, description="水平维网格点数 G_z")
    alpha: float = Field(default=0.05, gt=0, lt=1, description="名义检验水平")

    @classmethod
    def from_params(cls, params: dict[str, Any] | None = None, **overrides: Any) -> RunConfig:
        """
        由 YAML 参数字典与覆盖项构造配置

        Args:
            params: config/params.yaml 中的 run 段
            overrides: 非 None 的覆盖值（通常来自命令行）

        Returns:
            RunConfig
        """
        merged: dict[str, Any] = dict(params or {})
        merged.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**merged)
        except ValidationError as e:
            first = e.errors()[0]
            loc = ".".join(str(p) for p in first["loc"])
            raise ConfigError(f"配置项 {loc} 不合法: {first['msg']}") from e
