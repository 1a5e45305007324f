"""Security-assessment report: findings grouped under the checklist rows.

Every row of the phase's checklist is rendered exactly once and in catalog
order. Findings whose rule belongs to no row of the phase (GAS findings, the
timestamp rules in a coding report) are kept in ``extra``.
"""
import logging
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from src import __version__
from src.checks.catalog import Phase, rows_for, rules_in_row
from src.checks.diagnostics import Diagnostic, Severity

logger = logging.getLogger(__name__)

REPRODUCIBLE_TIMESTAMP = "1970-01-01T00:00:00"
SEVERITY_COLUMNS = [s.value for s in Severity]


class RowStatus(str, Enum):
    PASS = "pass"
    FINDINGS = "findings"
    MANUAL = "manual"


@dataclass(frozen=True)
class ReportRow:
    title: str
    rule_ids: Tuple[str, ...]
    status: RowStatus
    diagnostics: Tuple[Diagnostic, ...] = ()

    @property
    def findings(self) -> int:
        return sum(1 for d in self.diagnostics if d.severity is not Severity.MANUAL)

    @property
    def label(self) -> str:
        if self.status is RowStatus.FINDINGS:
            return f"findings({self.findings})"
        return self.status.value


@dataclass(frozen=True)
class ChecklistReport:
    phase: Phase
    rows: Tuple[ReportRow, ...]
    generated_at: str
    tool_version: str = __version__
    extra: Tuple[Diagnostic, ...] = ()
    inputs: Tuple[str, ...] = ()

    @property
    def diagnostics(self) -> List[Diagnostic]:
        return [d for row in self.rows for d in row.diagnostics] + list(self.extra)

    def summary_frame(self) -> pd.DataFrame:
        """One line per row: status and finding counts by severity"""
        records = []
        for row in self.rows:
            record = {"row": row.title, "status": row.label, "findings": row.findings}
            for severity in SEVERITY_COLUMNS:
                record[severity] = sum(1 for d in row.diagnostics if d.severity.value == severity)
            records.append(record)
        return pd.DataFrame.from_records(records, columns=["row", "status", "findings"] + SEVERITY_COLUMNS)

    def rule_frame(self) -> pd.DataFrame:
        """Findings per (rule, severity), manual items excluded"""
        records = [
            {"rule_id": d.rule_id, "severity": d.severity.value}
            for d in self.diagnostics
            if d.severity is not Severity.MANUAL
        ]
        frame = pd.DataFrame.from_records(records, columns=["rule_id", "severity"])
        if frame.empty:
            return pd.DataFrame(columns=["rule_id", "severity", "count"])
        return (
            frame.groupby(["rule_id", "severity"]).size().reset_index(name="count")
            .sort_values(["rule_id", "severity"]).reset_index(drop=True)
        )

    def severity_counts(self) -> dict:
        counts = {severity: 0 for severity in SEVERITY_COLUMNS}
        for diag in self.diagnostics:
            counts[diag.severity.value] += 1
        return counts

    def to_dict(self) -> dict:
        return {
            "phase": self.phase.value,
            "tool_version": self.tool_version,
            "generated_at": self.generated_at,
            "inputs": list(self.inputs),
            "rows": [
                {
                    "title": row.title,
                    "rule_ids": list(row.rule_ids),
                    "status": row.status.value,
                    "findings": row.findings,
                    "diagnostics": [d.to_dict() for d in row.diagnostics],
                }
                for row in self.rows
            ],
            "additional_findings": [d.to_dict() for d in self.extra],
            "summary": self.severity_counts(),
        }


def timestamp(reproducible: bool = False) -> str:
    if reproducible:
        return REPRODUCIBLE_TIMESTAMP
    return datetime.now().isoformat(timespec="seconds")


def build_report(
    phase: Phase,
    diagnostics: Iterable[Diagnostic],
    cross_phases: Sequence[Phase] = (),
    generated_at: Optional[str] = None,
    inputs: Sequence[str] = (),
) -> ChecklistReport:
    """Group ``diagnostics`` under the checklist rows of ``phase``.

    Args:
        phase: Phase.DESIGN or Phase.CODING
        diagnostics: Findings of the matching engines, in report order
        cross_phases: Further phases whose rules were run and may sit on a row of
            ``phase`` (a design report fed with Solidity sources passes CODING)
        generated_at: Timestamp text; the current time when omitted
        inputs: Input file names recorded in the report

    Returns:
        The report with one row per checklist row

    Raises:
        ValueError: If ``phase`` has no checklist
    """
    titles = rows_for(phase)
    phases = [phase] + [p for p in cross_phases if p is not phase]
    by_row = {title: [] for title in titles}
    extra = []
    for diag in diagnostics:
        if diag.checklist_ref in by_row:
            by_row[diag.checklist_ref].append(diag)
        else:
            extra.append(diag)

    rows = []
    for title in titles:
        rules = rules_in_row(title, phases)
        found = tuple(by_row[title])
        if any(d.severity is not Severity.MANUAL for d in found):
            status = RowStatus.FINDINGS
        elif any(not rule.is_manual for rule in rules):
            status = RowStatus.PASS
        else:
            status = RowStatus.MANUAL
        rows.append(ReportRow(title, tuple(r.rule_id for r in rules), status, found))

    report = ChecklistReport(
        phase=phase,
        rows=tuple(rows),
        generated_at=generated_at or timestamp(),
        extra=tuple(extra),
        inputs=tuple(inputs),
    )
    logger.info(
        f"{phase.value} report: {sum(1 for r in rows if r.status is RowStatus.FINDINGS)} of "
        f"{len(rows)} row(s) with findings, {len(extra)} additional finding(s)"
    )
    return report
