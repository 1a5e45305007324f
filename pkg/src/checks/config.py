from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional

from src.checks.catalog import RULES
from src.checks.diagnostics import Diagnostic, Severity
from src.model.errors import ConfigError

FAIL_LEVELS = (Severity.ERROR, Severity.WARNING, Severity.INFO)


@dataclass(frozen=True)
class LintConfig:
    """Rule selection and severity policy for one analysis phase.

    ``enabled_rules`` of None means every rule; ``disabled_rules`` is removed
    afterwards. Overrides and rule ids must name catalog rules.
    """

    enabled_rules: Optional[FrozenSet[str]] = None
    disabled_rules: FrozenSet[str] = frozenset()
    severity_overrides: Dict[str, Severity] = field(default_factory=dict)
    fail_level: Severity = Severity.ERROR

    def __post_init__(self):
        named = set(self.enabled_rules or ()) | set(self.disabled_rules) | set(self.severity_overrides)
        unknown = sorted(rule_id for rule_id in named if rule_id not in RULES)
        if unknown:
            raise ConfigError(f"unknown rule id(s): {', '.join(unknown)}")
        if self.fail_level not in FAIL_LEVELS:
            raise ConfigError(f"fail level must be error, warning or info, not '{self.fail_level.value}'")
        for rule_id, severity in self.severity_overrides.items():
            if severity is Severity.MANUAL or RULES[rule_id].is_manual:
                raise ConfigError(f"severity of '{rule_id}' cannot be changed to '{severity.value}'")

    def is_enabled(self, rule_id: str) -> bool:
        if self.enabled_rules is not None and rule_id not in self.enabled_rules:
            return False
        return rule_id not in self.disabled_rules

    def apply(self, diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
        """Drop disabled findings and apply severity overrides"""
        result = []
        for diag in diagnostics:
            if not self.is_enabled(diag.rule_id):
                continue
            override = self.severity_overrides.get(diag.rule_id)
            result.append(diag.with_severity(override) if override else diag)
        return result

    def with_fail_level(self, fail_level: Severity) -> "LintConfig":
        return LintConfig(self.enabled_rules, self.disabled_rules, dict(self.severity_overrides), fail_level)


def parse_rule_list(text: str) -> FrozenSet[str]:
    return frozenset(part.strip() for part in text.split(",") if part.strip())


def parse_fail_level(text: str) -> Severity:
    try:
        level = Severity.parse(text)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if level not in FAIL_LEVELS:
        raise ConfigError(f"fail level must be error, warning or info, not '{text}'")
    return level
