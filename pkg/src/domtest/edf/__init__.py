"""经验分布函数及其积分变换"""

from domtest.edf.summary import EdfSummary, describe_sample

__all__ = ["EdfSummary", "describe_sample"]
