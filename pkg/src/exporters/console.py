"""Plain-text rendering of diagnostics and checklist reports."""
from typing import Iterable, List, Optional, Sequence

from termcolor import colored

from src.checks.catalog import Rule
from src.checks.diagnostics import Diagnostic, Severity
from src.model.spans import ParseError
from src.report.checklist import ChecklistReport, RowStatus

SEVERITY_COLORS = {
    Severity.ERROR: "red",
    Severity.WARNING: "yellow",
    Severity.INFO: "cyan",
    Severity.MANUAL: "magenta",
}
STATUS_COLORS = {
    RowStatus.PASS: "green",
    RowStatus.FINDINGS: "red",
    RowStatus.MANUAL: "magenta",
}


class ConsoleExporter:
    """Renders findings as text lines; ANSI colour only when ``color`` is set"""

    def __init__(self, color: bool = False):
        self.color = color

    def _paint(self, text: str, color: Optional[str]) -> str:
        if not self.color or color is None:
            return text
        # TTY detection happens in the CLI
        return colored(text, color, force_color=True)

    def diagnostic(self, diag: Diagnostic) -> str:
        severity = self._paint(diag.severity.value, SEVERITY_COLORS[diag.severity])
        location = f"{diag.location}: " if diag.location else ""
        return f"{location}{severity} {diag.rule_id}: {diag.message}"

    def diagnostics(self, diags: Iterable[Diagnostic]) -> str:
        return "".join(self.diagnostic(d) + "\n" for d in diags)

    def parse_errors(self, errors: Sequence[ParseError]) -> str:
        label = self._paint("error", SEVERITY_COLORS[Severity.ERROR])
        return "".join(f"{e.span}: {label} syntax: {e.message}\n" for e in errors)

    def report(self, report: ChecklistReport) -> str:
        lines: List[str] = [
            f"{report.phase.value} phase security checklist "
            f"(abcde {report.tool_version}, generated {report.generated_at})",
        ]
        if report.inputs:
            lines.append(f"inputs: {', '.join(report.inputs)}")
        lines.append("")
        width = max(len(row.label) for row in report.rows) + 2
        for row in report.rows:
            status = self._paint(f"[{row.label}]".ljust(width), STATUS_COLORS[row.status])
            lines.append(f"{status} {row.title}")
            lines += [f"    {self.diagnostic(d)}" for d in row.diagnostics]
        if report.extra:
            lines += ["", "additional findings:"]
            lines += [f"    {self.diagnostic(d)}" for d in report.extra]
        counts = report.severity_counts()
        lines += ["", "summary: " + ", ".join(f"{counts[s.value]} {s.value}" for s in Severity)]
        return "\n".join(lines) + "\n"

    @staticmethod
    def rules(rules: Iterable[Rule]) -> str:
        lines = []
        for rule in rules:
            row = f" [{rule.row}]" if rule.row else ""
            lines.append(
                f"{rule.rule_id:<16} {rule.severity.value:<8} {rule.classification.value:<21} {rule.title}{row}"
            )
        return "\n".join(lines) + "\n"
