"""Markdown rendering of a checklist report."""
from typing import List

from src.checks.diagnostics import Diagnostic
from src.report.checklist import ChecklistReport
from src.utils.text_cleaner import trim_blank_lines


def _cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def _finding(diag: Diagnostic) -> str:
    location = f" `{diag.location}`" if diag.location else ""
    return f"- **{diag.severity.value}** `{diag.rule_id}`{location}: {_cell(diag.message)}"


def render_markdown(report: ChecklistReport) -> str:
    title = report.phase.value.capitalize()
    lines: List[str] = [
        f"# {title} phase security checklist",
        "",
        f"Generated {report.generated_at} by abcde {report.tool_version}.",
    ]
    if report.inputs:
        lines += ["", "Inputs: " + ", ".join(f"`{name}`" for name in report.inputs)]
    lines += ["", "| # | Checklist row | Status | Rules |", "|---|---|---|---|"]
    for number, row in enumerate(report.rows, 1):
        rules = ", ".join(f"`{r}`" for r in row.rule_ids)
        lines.append(f"| {number} | {_cell(row.title)} | {row.label} | {rules} |")

    for row in report.rows:
        if row.diagnostics:
            lines += ["", f"## {row.title}", ""]
            lines += [_finding(d) for d in row.diagnostics]
    if report.extra:
        lines += ["", "## Additional findings", ""]
        lines += [_finding(d) for d in report.extra]
    return trim_blank_lines("\n".join(lines)) + "\n"
