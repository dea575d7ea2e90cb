"""
Inference 模块 - 统计量、接触集与 bootstrap p 值
"""

from domtest.inference.bootstrap import (
    TestResult,
    bootstrap_pvalue,
    exceedance_pvalue,
    run_test,
    run_tests,
)
from domtest.inference.statistic import (
    ContactMask,
    StatisticValue,
    contact_set,
    masked_statistic,
    statistic,
)

__all__ = [
    "ContactMask",
    "StatisticValue",
    "TestResult",
    "bootstrap_pvalue",
    "contact_set",
    "exceedance_pvalue",
    "masked_statistic",
    "run_test",
    "run_tests",
    "statistic",
]
