"""
基准测试与命令行接口层
"""

from .metrics import l2_norm, abs_errors
from .reference import (
    REFERENCE,
    REPORT_POINTS,
    DESK_THRESHOLDS,
    ReferenceData,
    ReferenceRow,
    SummaryRow,
    printed_unit,
)
from .bench import (
    ExperimentReport,
    ReportRow,
    evaluation_grid,
    run_experiment,
    run_fnn_baseline,
)
from .formatter import (
    emit_report,
    parse_report_csv,
    report_from_csv,
    format_error,
    format_table1_row,
    format_summary,
    format_comparison,
    format_reference,
)
from .compare import ComparisonEntry, ComparisonSummary, compare_to_reference
from .verify import CheckResult, run_verification

__all__ = [
    "l2_norm",
    "abs_errors",
    "REFERENCE",
    "REPORT_POINTS",
    "DESK_THRESHOLDS",
    "ReferenceData",
    "ReferenceRow",
    "SummaryRow",
    "printed_unit",
    "ExperimentReport",
    "ReportRow",
    "evaluation_grid",
    "run_experiment",
    "run_fnn_baseline",
    "emit_report",
    "parse_report_csv",
    "report_from_csv",
    "format_error",
    "format_table1_row",
    "format_summary",
    "format_comparison",
    "format_reference",
    "ComparisonEntry",
    "ComparisonSummary",
    "compare_to_reference",
    "CheckResult",
    "run_verification",
]
