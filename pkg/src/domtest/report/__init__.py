"""
Report 模块 - 检验报告与网格导出
"""

from domtest.report.grids import emit_distributions, emit_grids, field_frame
from domtest.report.run_report import (
    ArmSummary,
    Report,
    Timing,
    build_report,
    digest_files,
    digest_samples,
    print_report,
)

__all__ = [
    "ArmSummary",
    "Report",
    "Timing",
    "build_report",
    "digest_files",
    "digest_samples",
    "emit_distributions",
    "emit_grids",
    "field_frame",
    "print_report",
]
