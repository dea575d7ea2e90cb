"""
异常定义

库内统一抛出以下异常，CLI 负责映射为退出码：
- ConfigError: 参数/配置不合法（退出码 2）
- DataError: 输入数据不合法（退出码 3）
"""

from __future__ import annotations


class DomTestError(Exception):
    """domtest 异常基类"""


class ConfigError(DomTestError, ValueError):
    """运行配置不合法"""


class DataError(DomTestError, ValueError):
    """输入数据不合法"""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"第 {row} 行: {message}"
        super().__init__(message)


class GridMismatchError(DomTestError):
    """EDF 摘要与评估网格的支撑集不一致"""
