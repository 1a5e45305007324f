from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Optional, Tuple

from src.model.spans import SourceSpan
from src.model.types import PatternId


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"
    MANUAL = "manual"

    @property
    def rank(self) -> int:
        return {"error": 3, "warning": 2, "info": 1, "manual": 0}[self.value]

    def meets(self, threshold: "Severity") -> bool:
        """True if a finding of this severity reaches ``threshold``; manual items never do"""
        if self is Severity.MANUAL:
            return False
        return self.rank >= threshold.rank

    @classmethod
    def parse(cls, text: str) -> "Severity":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown severity '{text}'") from None


@dataclass(frozen=True)
class Diagnostic:
    """One finding: rule id, severity, location, message and checklist cross-reference.

    Model findings carry a ``path`` (e.g. ``scenario Drain / message 3``) instead of, or
    in addition to, a source span. Manual items usually have neither.
    """

    rule_id: str
    severity: Severity
    message: str
    span: Optional[SourceSpan] = None
    path: Optional[str] = None
    checklist_ref: str = ""
    patterns: FrozenSet[PatternId] = frozenset()
    order: Tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def location(self) -> str:
        if self.span is not None:
            return str(self.span)
        return self.path or ""

    def sorted_patterns(self) -> Tuple[str, ...]:
        return tuple(p.value for p in PatternId if p in self.patterns)

    def with_severity(self, severity: Severity) -> "Diagnostic":
        return Diagnostic(
            self.rule_id,
            severity,
            self.message,
            self.span,
            self.path,
            self.checklist_ref,
            self.patterns,
            self.order,
        )

    def to_dict(self) -> dict:
        span = None
        if self.span is not None:
            span = {
                "file": self.span.file,
                "line": self.span.line,
                "column": self.span.column,
                "length": self.span.length,
            }
        return {
            "rule_id": self.rule_id,
            "severity": self.severity.value,
            "message": self.message,
            "span": span,
            "path": self.path,
            "checklist_ref": self.checklist_ref,
            "patterns": list(self.sorted_patterns()),
        }


def source_order(diag: Diagnostic) -> tuple:
    """Sort key for source-file findings: (file, line, column, rule id), spanless items last"""
    if diag.span is None:
        return (1, "", 0, 0, diag.path or "", diag.rule_id)
    span = diag.span
    return (0, span.file, span.line, span.column, "", diag.rule_id)


def model_order(diag: Diagnostic) -> tuple:
    """Sort key for model findings: (declaration order, rule id)"""
    return (diag.order, diag.rule_id)
