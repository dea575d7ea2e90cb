"""
Criteria 模块 - 各占优准则的检验函数
"""

from domtest.criteria.functions import (
    COORDINATES,
    CoordinateField,
    CriteriaEvaluator,
    Domain,
    coordinate_domains,
    evaluate_g,
    evaluate_many,
)

__all__ = [
    "COORDINATES",
    "CoordinateField",
    "CriteriaEvaluator",
    "Domain",
    "coordinate_domains",
    "evaluate_g",
    "evaluate_many",
]
