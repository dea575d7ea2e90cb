"""
Validation 模块 - 模拟场景与 Monte Carlo 验证
"""

from domtest.validation.montecarlo import (
    mc_power,
    mc_pvalues,
    mc_size,
    rejection_rates,
    write_results,
)
from domtest.validation.scenarios import GeneratorKind, ScenarioSpec, generate

__all__ = [
    "GeneratorKind",
    "ScenarioSpec",
    "generate",
    "mc_power",
    "mc_pvalues",
    "mc_size",
    "rejection_rates",
    "write_results",
]
