"""
与发表数值对照
"""

from typing import List, NamedTuple, Optional

from .reference import REFERENCE, ReferenceData, REPORT_POINTS, DESK_THRESHOLDS


class ComparisonEntry(NamedTuple):
    x: float
    our_error: Optional[float]
    published_ldnn_error: float
    published_adm_error: float
    passed: bool
    note: str


class ComparisonSummary(NamedTuple):
    experiment_id: int
    entries: List[ComparisonEntry]
    l2_test: float
    published_l2_test: float
    threshold: float
    l2_passed: bool

    @property
    def all_passed(self) -> bool:
        return self.l2_passed and all(entry.passed for entry in self.entries)


def compare_to_reference(report, reference: ReferenceData = REFERENCE,
                         experiment_id: int = None) -> ComparisonSummary:
    """
    六个报告点上列出 (我方误差, 发表的 LDNN 误差, 发表的 ADM 误差)；ADM 误差由发表的精确值与 ADM 值算出

    逐点与 L2_test 均以桌面规模阈值判定（实验 2 为 1e-3，其余 1e-4）。
    """
    if experiment_id is not None and experiment_id != report.experiment_id:
        raise ValueError(f"实验编号不一致: 报告为 {report.experiment_id}，对照为 {experiment_id}")
    experiment_id = report.experiment_id
    threshold = DESK_THRESHOLDS.get(experiment_id, 1e-4)

    entries = []
    for x in REPORT_POINTS:
        ref = reference.row(experiment_id, x)
        ours = report.row_at(x)
        our_error = None if ours is None else ours.abs_error
        entries.append(ComparisonEntry(
            x,
            our_error,
            float(ref.error),
            abs(float(ref.exact) - float(ref.adm)),
            our_error is not None and our_error <= threshold,
            ref.note,
        ))
    l2_passed = report.l2_test == report.l2_test and report.l2_test <= threshold
    return ComparisonSummary(experiment_id, entries, report.l2_test,
                             reference.l2_test(experiment_id), threshold, l2_passed)
