"""
日志配置模块

日志一律写 stderr（stdout 留给结果表格），可选写入 logs/ 目录。
Monte Carlo 中内层 bootstrap 每次都会打日志，可单独提高这些模块的级别
"""

import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

from loguru import logger

# 内层检验的日志来源
INNER_MODULES = ("domtest.inference", "domtest.criteria", "domtest.edf")


def _level_filter(inner_level: str | None) -> Callable[[dict[str, Any]], bool]:
    if inner_level is None:
        return lambda record: True
    threshold = logger.level(inner_level).no

    def _filter(record: dict[str, Any]) -> bool:
        name = record["name"] or ""
        if name.startswith(INNER_MODULES):
            return bool(record["level"].no >= threshold)
        return True

    return _filter


def setup_logging(
    log_level: str = "INFO",
    log_dir: Path | None = None,
    log_to_file: bool = False,
    inner_level: str | None = None,
) -> None:
    """
    配置日志

    Args:
        log_level: 日志级别
        log_dir: 日志目录
        log_to_file: 是否写入文件
        inner_level: 检验内部模块的最低级别（如模拟时设为 WARNING），None 不单独限制
    """
    logger.remove()
    level_filter = _level_filter(inner_level)

    logger.add(
        sys.stderr,
        format=(
            "<green>{time:HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{name}</cyan> - <level>{message}</level>"
        ),
        level=log_level,
        filter=level_filter,
        colorize=True,
    )

    if log_to_file and log_dir:
        log_dir.mkdir(parents=True, exist_ok=True)
        file_format = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} - {message}"

        # 模拟运行日志量大，按大小轮转
        logger.add(
            log_dir / "domtest_{time:YYYY-MM-DD}.log",
            format=file_format,
            level=log_level,
            filter=level_filter,
            rotation="50 MB",
            retention=10,
            compression="zip",
        )
        logger.add(
            log_dir / "errors.log",
            format=file_format,
            level="ERROR",
            rotation="10 MB",
            retention="30 days",
        )

    logger.debug(f"日志配置完成: level={log_level}, inner_level={inner_level}")
