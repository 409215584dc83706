"""
报告格式化：表格、CSV 及其解析、汇总行与对照结果
"""

import csv
import io
from typing import Any, Dict, List

from .bench import ExperimentReport, ReportRow
from .reference import REFERENCE, ReferenceData

CSV_HEADER = ("x", "y_exact", "y_pred", "abs_error")
METRIC_KEYS = ("l2_train", "l2_test", "wall_time_s")
TABLE_HEADER = ("x", "exact", "predicted", "error")
FORMATS = ("table", "csv")


def format_error(value: float) -> str:
    """误差列固定三位有效数字的科学计数法"""
    return f"{value:.2e}"


def _render_table(header, rows: List[List[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [" | ".join(f"{h:<{widths[i]}}" for i, h in enumerate(header))]
    lines.append("-" * len(lines[0]))
    for row in rows:
        lines.append(" | ".join(f"{cell:<{widths[i]}}" for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"


def _table_rows(report) -> List[List[str]]:
    # 有报告点时只列报告点，对应发表的逐点表版式
    rows = report.reporting_rows or report.rows
    return [[f"{row.x:.1f}" if round(row.x, 1) == row.x else f"{row.x:.4f}",
             f"{row.y_exact:.10g}", f"{row.y_pred:.10g}", format_error(row.abs_error)]
            for row in rows]


def emit_report(report, fmt: str = "table", include_timing: bool = False) -> str:
    """
    table: x, exact, predicted, error 四列（误差为三位有效数字的科学计数法）
    csv:   每个评估点一行，全精度，末尾附指标块
    默认不写耗时，相同种子与配置的两次运行输出逐字节一致；include_timing=True 时附加 wall_time_s 行
    """
    if fmt not in FORMATS:
        raise ValueError(f"未知的输出格式 '{fmt}'，可选: {', '.join(FORMATS)}")
    if fmt == "table":
        return _render_table(TABLE_HEADER, _table_rows(report))

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in report.rows:
        writer.writerow([repr(row.x), repr(row.y_exact), repr(row.y_pred), repr(row.abs_error)])
    writer.writerow(["l2_train", repr(report.l2_train)])
    writer.writerow(["l2_test", repr(report.l2_test)])
    if include_timing:
        writer.writerow(["wall_time_s", repr(report.wall_time_seconds)])
    return buffer.getvalue()


def parse_report_csv(text: str) -> Dict[str, Any]:
    """emit_report(csv) 的逆过程，返回 {"rows": [...], "l2_train": ..., ...}"""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ValueError(f"CSV 表头应为 {','.join(CSV_HEADER)}，实际为 {header}")
    parsed: Dict[str, Any] = {"rows": []}
    for line_no, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if fields[0] in METRIC_KEYS:
            if len(fields) != 2:
                raise ValueError(f"第{line_no}行指标格式错误: {fields}")
            parsed[fields[0]] = float(fields[1])
            continue
        if len(fields) != len(CSV_HEADER):
            raise ValueError(f"第{line_no}行列数应为 {len(CSV_HEADER)}: {fields}")
        parsed["rows"].append(tuple(float(v) for v in fields))
    return parsed


def report_from_csv(text: str, experiment_id: int):
    parsed = parse_report_csv(text)
    rows = [ReportRow(*values) for values in parsed["rows"]]
    return ExperimentReport(experiment_id, rows, parsed.get("l2_train", float("nan")),
                            parsed.get("l2_test", float("nan")), parsed.get("wall_time_s", 0.0))


def format_orders(config: Dict[str, Any]) -> str:
    n2 = config.get("n2")
    return f"({config.get('n1')},{'-' if n2 is None else n2})"


def format_table1_row(report) -> str:
    """汇总表样式：结构、m1、(N1,N2)、L2_train、m2、L2_test"""
    config = report.config
    layers = "[" + ",".join(str(n) for n in config.get("layer_sizes", [])) + "]"
    return (f"{report.method} 实验{report.experiment_id}: {layers} | m1={config.get('m1')} | "
            f"{format_orders(config)} | L2_train={report.l2_train:.6e} | "
            f"m2={config.get('m2')} | L2_test={report.l2_test:.6e}")


def format_summary(report) -> str:
    lines = [format_table1_row(report), f"耗时: {report.wall_time_seconds:.1f}s"]
    if report.state is not None and report.state.history:
        last = report.state.history[-1]
        lines.append(f"最终损失: {last.total:.6e} (迭代 {last.iteration})")
    return "\n".join(lines) + "\n"


def format_comparison(summary) -> str:
    """compare_to_reference 的结果：我方误差与发表的 LDNN、ADM 误差并列"""
    header = ("x", "ours", "published LDNN", "published ADM (as reported)", "pass", "note")
    rows = []
    for entry in summary.entries:
        ours = "-" if entry.our_error is None else format_error(entry.our_error)
        rows.append([f"{entry.x:.1f}", ours, format_error(entry.published_ldnn_error),
                     format_error(entry.published_adm_error), "yes" if entry.passed else "no",
                     entry.note])
    text = f"实验{summary.experiment_id} 对照\n" + _render_table(header, rows)
    status = "通过" if summary.l2_passed else "未通过"
    text += (f"L2_test: ours={summary.l2_test:.3e}, published={summary.published_l2_test:.3e}, "
             f"threshold={summary.threshold:.0e} -> {status}\n")
    return text


def format_reference(experiment_id: int, reference: ReferenceData = REFERENCE) -> str:
    """打印内置的发表数值"""
    summary = reference.summary(experiment_id)
    text = (f"实验{experiment_id}: {summary.layers} | m1={summary.m1} | {summary.orders} | "
            f"L2_train={summary.l2_train} | m2={summary.m2} | L2_test={summary.l2_test}\n")
    header = ("x", "exact", "ADM", "FNN", "LDNN", "error", "note")
    rows = [[row.x, row.exact, row.adm, row.fnn, row.ldnn, row.error, row.note]
            for row in reference.rows(experiment_id)]
    return text + _render_table(header, rows)

