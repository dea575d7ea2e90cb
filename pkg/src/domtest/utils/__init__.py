"""
Utils 模块 - 工具函数
"""

from domtest.utils.math import (
    binomial_upper_bound,
    contact_threshold,
    is_nondecreasing,
    mc_standard_error,
    positive_part,
    rejects,
)

__all__ = [
    "positive_part",
    "contact_threshold",
    "rejects",
    "mc_standard_error",
    "binomial_upper_bound",
    "is_nondecreasing",
]
