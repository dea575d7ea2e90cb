"""
Data 模块 - 样本加载、支撑集与评估网格
"""

from domtest.data.grid import build_grid, pooled_support
from domtest.data.loader import Schema, derive_changes, load_samples, write_samples
from domtest.data.model import (
    Criterion,
    Direction,
    EvaluationGrid,
    Observation,
    PolicySample,
    RunConfig,
    SupportBox,
)

__all__ = [
    "Observation",
    "PolicySample",
    "SupportBox",
    "EvaluationGrid",
    "RunConfig",
    "Criterion",
    "Direction",
    "Schema",
    "load_samples",
    "derive_changes",
    "write_samples",
    "pooled_support",
    "build_grid",
]
