"""
检验报告模块

JSON 报告（可无损往返）、Markdown 汇总表与终端表格
"""

from __future__ import annotations

import hashlib
from collections.abc import Sequence
from datetime import datetime
from pathlib import Path
from typing import Any

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field
from rich.console import Console
from rich.table import Table

from domtest import __version__
from domtest.data.model import Criterion, Direction, PolicySample, RunConfig
from domtest.inference.bootstrap import TestResult


class ArmSummary(BaseModel):
    """单组描述统计"""

    model_config = ConfigDict(extra="ignore")

    label: str
    n: int
    mean_change: float
    mean_gain: float  # S¹(0)
    mean_loss: float  # H¹(0)
    mean_level: float


class Timing(BaseModel):
    """运行耗时（报告中唯一不可复现的部分）"""

    model_config = ConfigDict(extra="ignore")

    started_at: str
    elapsed_seconds: float


class Report(BaseModel):
    """一次检验运行的完整报告"""

    model_config = ConfigDict(extra="ignore")

    tool: str = "domtest"
    version: str = __version__
    input_digest: str
    config: RunConfig
    grid: dict[str, Any] = Field(default_factory=dict)
    arms: list[ArmSummary] = Field(default_factory=list)
    results: list[TestResult] = Field(default_factory=list)
    timing: Timing | None = None

    def result_for(self, criterion: Criterion, direction: Direction) -> TestResult | None:
        """查找指定准则与方向的结果"""
        for r in self.results:
            if r.criterion == criterion and r.direction == direction:
                return r
        return None

    def without_timing(self) -> dict[str, Any]:
        """去掉耗时后的字典（用于比较两次运行）"""
        return self.model_dump(mode="json", exclude={"timing"})

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def save(self, path: str | Path) -> Path:
        """
        保存 JSON 报告

        Args:
            path: 输出路径

        Returns:
            实际写入的路径
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        logger.info(f"JSON 报告已保存: {path}")
        return path

    @classmethod
    def load(cls, path: str | Path) -> Report:
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    def _hypothesis_labels(self) -> tuple[str, str]:
        if len(self.arms) == 2:
            a, b = self.arms[0].label, self.arms[1].label
        else:
            a, b = "A", "B"
        return f"H0: {a} ≿ {b}", f"H0: {b} ≿ {a}"

    def _rows(self) -> list[tuple[str, TestResult | None, TestResult | None]]:
        seen: list[Criterion] = []
        for r in self.results:
            if r.criterion not in seen:
                seen.append(r.criterion)
        return [
            (
                c.label,
                self.result_for(c, Direction.A_OVER_B),
                self.result_for(c, Direction.B_OVER_A),
            )
            for c in seen
        ]

    def to_markdown(self) -> str:
        """生成 Markdown 汇总表（每个准则一行，两个方向并列）"""
        ab, ba = self._hypothesis_labels()
        lines = [
            "# 占优检验报告",
            "",
            f"> 输入摘要: `{self.input_digest[:16]}`  ",
            f"> R={self.config.reps}, 网格 {self.config.grid_x}×{self.config.grid_z}, "
            f"seed={self.config.seed}, α={self.config.alpha}",
            "",
        ]

        if self.arms:
            lines.extend([
                "## 样本",
                "",
                "| 组 | n | 平均变化 | 平均收益 | 平均损失 | 平均水平 |",
                "|----|---|----------|----------|----------|----------|",
            ])
            for arm in self.arms:
                lines.append(
                    f"| {arm.label} | {arm.n} | {arm.mean_change:.4f} | {arm.mean_gain:.4f} | "
                    f"{arm.mean_loss:.4f} | {arm.mean_level:.4f} |"
                )
            lines.append("")

        lines.extend([
            "## 检验结果",
            "",
            f"| 准则 | {ab} 统计量 | p 值 | {ba} 统计量 | p 值 |",
            "|------|------|------|------|------|",
        ])
        for label, r_ab, r_ba in self._rows():
            lines.append(f"| {label} | {_cell(r_ab)} | {_cell(r_ba)} |")
        lines.extend(["", "*带 \\* 的 p 值在名义水平下拒绝原假设*"])
        return "\n".join(lines)

    def to_table(self) -> Table:
        """终端表格"""
        ab, ba = self._hypothesis_labels()
        table = Table(title="📊 占优检验结果")
        table.add_column("准则", style="cyan")
        table.add_column(f"{ab} T_n", justify="right")
        table.add_column("p", justify="right")
        table.add_column(f"{ba} T_n", justify="right")
        table.add_column("p", justify="right")
        for label, r_ab, r_ba in self._rows():
            table.add_row(label, *_table_cells(r_ab), *_table_cells(r_ba))
        return table


def _cell(result: TestResult | None) -> str:
    if result is None:
        return "- | -"
    star = "*" if result.reject else ""
    return f"{result.t_n:.4g} | {result.p_value:.3f}{star}"


def _table_cells(result: TestResult | None) -> tuple[str, str]:
    if result is None:
        return "-", "-"
    p = f"{result.p_value:.3f}"
    if result.reject:
        p = f"[red]{p}[/red]"
    return f"{result.t_n:.4g}", p


def digest_files(paths: Sequence[str | Path]) -> str:
    """按顺序对输入文件内容计算 sha256"""
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    return h.hexdigest()


def digest_samples(a: PolicySample, b: PolicySample) -> str:
    """对样本数值（而非文件）计算 sha256，用于模拟数据"""
    h = hashlib.sha256()
    for sample in (a, b):
        h.update(sample.label.encode("utf-8"))
        h.update(sample.x.tobytes())
        h.update(sample.z.tobytes())
    return h.hexdigest()


def build_report(
    input_digest: str,
    config: RunConfig,
    results: list[TestResult],
    arms: list[ArmSummary] | None = None,
    grid: dict[str, Any] | None = None,
    started_at: datetime | None = None,
    elapsed_seconds: float | None = None,
) -> Report:
    """
    组装报告

    Args:
        input_digest: 输入摘要
        config: 运行配置
        results: 检验结果
        arms: 各组描述统计
        grid: 网格描述
        started_at: 开始时间
        elapsed_seconds: 耗时

    Returns:
        Report
    """
    timing = None
    if started_at is not None:
        timing = Timing(started_at=started_at.isoformat(), elapsed_seconds=elapsed_seconds or 0.0)
    return Report(
        input_digest=input_digest,
        config=config,
        grid=grid or {},
        arms=arms or [],
        results=results,
        timing=timing,
    )


def print_report(report: Report, console: Console | None = None) -> None:
    """在终端显示结果表"""
    (console or Console()).print(report.to_table())
