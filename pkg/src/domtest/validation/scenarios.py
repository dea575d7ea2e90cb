"""
模拟场景与数据生成

两组样本均来自截断高斯 copula：相关系数 rho 控制 (x, z) 的关联，
边际为截断正态。各场景只在一组上做改动
"""

from __future__ import annotations

from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from scipy.stats import norm, truncnorm

from domtest.data.model import Criterion, Direction, PolicySample, RunConfig
from domtest.errors import ConfigError
from domtest.settings import load_yaml_config

# figure1_replica: 两组水平分布在 z = 9 附近交叉
FIGURE1_Z = {"A": (7.6, 0.7), "B": (7.4, 0.8)}


class GeneratorKind(str, Enum):
    """数据生成方式"""

    NULL_IDENTICAL = "null_identical"  # 两组同分布
    X_LOCATION_SHIFT = "x_location_shift"  # B 的 x 平移 shift
    Z_LOCATION_SHIFT = "z_location_shift"  # B 的 z 平移 shift
    ASSOCIATION_FLIP = "association_flip"  # B 的 copula 相关系数取反
    FIGURE1_REPLICA = "figure1_replica"  # A 在变化上一阶占优，水平分布交叉


class ScenarioSpec(BaseModel):
    """模拟场景"""

    model_config = ConfigDict(frozen=True, extra="ignore")

    name: str = "scenario"
    generator: GeneratorKind = GeneratorKind.NULL_IDENTICAL

    # 样本量
    n_a: int = Field(default=200, ge=4)
    n_b: int = Field(default=200, ge=4)
    ladder: list[int] = Field(default_factory=list, description="功效检验的每组样本量序列")

    # 分布参数
    shift: float = Field(default=0.0, allow_inf_nan=False)
    rho: float = Field(default=0.5, gt=-1, lt=1)
    x_mean: float = Field(default=0.0, allow_inf_nan=False)
    x_sd: float = Field(default=0.5, gt=0)
    x_bounds: tuple[float, float] = (-2.0, 2.0)
    z_mean: float = Field(default=7.5, allow_inf_nan=False)
    z_sd: float = Field(default=0.75, gt=0)
    z_bounds: tuple[float, float] = (5.0, 10.0)

    # Monte Carlo 与检验参数
    mc_reps: int = Field(default=200, ge=1)
    reps: int = Field(default=199, ge=1, description="内层 bootstrap 重复次数")
    alpha: float = Field(default=0.05, ge=0, lt=1)
    criteria: list[Criterion] = Field(default_factory=Criterion.main_six)
    direction: Direction = Direction.BOTH
    grid_x: int = Field(default=100, ge=2)
    grid_z: int = Field(default=50, ge=2)
    eta: float = Field(default=1e-6, gt=0)
    contact_scale: float = Field(default=4.0, gt=0)

    @field_validator("ladder")
    @classmethod
    def _ladder_sizes(cls, v: list[int]) -> list[int]:
        if any(n < 4 for n in v):
            raise ValueError("样本量序列中每项至少为 4")
        return v

    @field_validator("x_bounds", "z_bounds")
    @classmethod
    def _ordered(cls, v: tuple[float, float]) -> tuple[float, float]:
        if not (np.isfinite(v[0]) and np.isfinite(v[1]) and v[0] < v[1]):
            raise ValueError(f"截断区间不合法: {v}")
        return v

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ScenarioSpec:
        try:
            return cls(**data)
        except ValidationError as e:
            first = e.errors()[0]
            loc = ".".join(str(p) for p in first["loc"])
            raise ConfigError(f"场景配置 {loc} 不合法: {first['msg']}") from e

    @classmethod
    def from_yaml(cls, path: str | Path) -> ScenarioSpec:
        """从 YAML 文件加载场景"""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"场景文件不存在: {path}")
        data = load_yaml_config(path)
        data.setdefault("name", path.stem)
        return cls.from_dict(data)

    def run_config(self, seed: int) -> RunConfig:
        """内层检验使用的配置；alpha = 0 时仍用默认值构造，拒绝判断另行处理"""
        return RunConfig(
            criteria=self.criteria,
            direction=self.direction,
            reps=self.reps,
            seed=seed,
            eta=self.eta,
            contact_scale=self.contact_scale,
            grid_x=self.grid_x,
            grid_z=self.grid_z,
            alpha=self.alpha if self.alpha > 0 else 0.05,
        )


def _draw_arm(
    rng: np.random.Generator,
    n: int,
    rho: float,
    x_params: tuple[float, float, tuple[float, float]],
    z_params: tuple[float, float, tuple[float, float]],
) -> tuple[np.ndarray, np.ndarray]:
    """高斯 copula + 截断正态边际"""
    e = rng.standard_normal((n, 2))
    g1 = e[:, 0]
    g2 = rho * e[:, 0] + np.sqrt(1.0 - rho * rho) * e[:, 1]
    u = norm.cdf(np.column_stack((g1, g2)))
    u = np.clip(u, 1e-12, 1.0 - 1e-12)

    out = []
    for col, (mean, sd, (lo, hi)) in enumerate((x_params, z_params)):
        a, b = (lo - mean) / sd, (hi - mean) / sd
        out.append(truncnorm.ppf(u[:, col], a, b, loc=mean, scale=sd))
    return out[0], out[1]


def generate(
    spec: ScenarioSpec,
    seed: int | Sequence[int],
    n_a: int | None = None,
    n_b: int | None = None,
) -> tuple[PolicySample, PolicySample]:
    """
    按场景生成两组样本

    Args:
        spec: 场景
        seed: 随机种子（整数或整数序列）
        n_a: 覆盖 A 组样本量
        n_b: 覆盖 B 组样本量

    Returns:
        (样本 A, 样本 B)
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    n_a = n_a or spec.n_a
    n_b = n_b or spec.n_b
    x_params = (spec.x_mean, spec.x_sd, spec.x_bounds)
    z_params = (spec.z_mean, spec.z_sd, spec.z_bounds)
    kind = spec.generator

    if kind is GeneratorKind.FIGURE1_REPLICA:
        za_mean, za_sd = FIGURE1_Z["A"]
        zb_mean, zb_sd = FIGURE1_Z["B"]
        xa, za = _draw_arm(rng, n_a, spec.rho, x_params, (za_mean, za_sd, spec.z_bounds))
        xb, zb = _draw_arm(rng, n_b, spec.rho, x_params, (zb_mean, zb_sd, spec.z_bounds))
        xa = xa + spec.shift
    else:
        xa, za = _draw_arm(rng, n_a, spec.rho, x_params, z_params)
        rho_b = -spec.rho if kind is GeneratorKind.ASSOCIATION_FLIP else spec.rho
        xb, zb = _draw_arm(rng, n_b, rho_b, x_params, z_params)
        if kind is GeneratorKind.X_LOCATION_SHIFT:
            xb = xb + spec.shift
        elif kind is GeneratorKind.Z_LOCATION_SHIFT:
            zb = zb + spec.shift

    logger.debug(f"生成样本: {spec.name} ({kind.value}), n_a={n_a}, n_b={n_b}")
    return PolicySample("A", xa, za), PolicySample("B", xb, zb)
