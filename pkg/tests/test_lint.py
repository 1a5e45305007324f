import os
import re

import pytest

from src.checks.catalog import RULES
from src.checks.config import LintConfig, parse_fail_level, parse_rule_list
from src.checks.diagnostics import Severity
from src.checks.lint import CHECKS, lint
from src.model.errors import ConfigError
from src.solidity.parser import parse_solidity
from tests.conftest import CLEAN_DIR, VULNERABLE_DIR, load_unit, read_text, sol_files

_EXPECT_RE = re.compile(r"//\s*expect:\s*([A-Z0-9-]+)")

TX_ORIGIN = """pragma solidity 0.5.16;

contract Wallet {
    address owner;

    function setOwner(address newOwner) public {
        require(newOwner != address(0));
%s
    }
}
"""


def _automatic(diagnostics):
    return [d for d in diagnostics if d.severity is not Severity.MANUAL]


def _marker(path):
    for number, line in enumerate(read_text(path).split("\n"), 1):
        match = _EXPECT_RE.search(line)
        if match:
            return match.group(1), number
    raise AssertionError(f"{path} has no expect marker")


def _lint_text(text, config=None):
    return lint(parse_solidity(text, file="t.sol"), config)


@pytest.mark.parametrize("name", sol_files(VULNERABLE_DIR))
def test_vulnerable_sample_triggers_its_rule(name):
    path = os.path.join(VULNERABLE_DIR, name)
    rule_id, line = _marker(path)
    found = _automatic(lint(load_unit(path)))
    assert {d.rule_id for d in found} == {rule_id}
    assert any(d.rule_id == rule_id and d.span.line == line for d in found)


@pytest.mark.parametrize("name", sol_files(CLEAN_DIR))
def test_clean_sample_has_no_findings(name):
    found = _automatic(lint(load_unit(os.path.join(CLEAN_DIR, name))))
    assert found == []


def test_corpus_covers_every_rule():
    covered = {_marker(os.path.join(VULNERABLE_DIR, name))[0] for name in sol_files(VULNERABLE_DIR)}
    assert covered == set(CHECKS)
    assert {name for name in sol_files(CLEAN_DIR)} == {name for name in sol_files(VULNERABLE_DIR)}


@pytest.mark.parametrize("name", sol_files(VULNERABLE_DIR))
def test_disabling_a_rule_removes_only_its_findings(name):
    unit = load_unit(os.path.join(VULNERABLE_DIR, name))
    baseline = lint(unit)
    for rule_id in CHECKS:
        found = lint(unit, LintConfig(disabled_rules=frozenset({rule_id})))
        assert found == [d for d in baseline if d.rule_id != rule_id]


def test_empty_contract_yields_only_manual_items():
    found = _lint_text("pragma solidity 0.5.16;\ncontract C { }\n")
    assert [d.rule_id for d in found] == ["CL-COVERAGE", "CL-FIXWARN"]
    assert all(d.severity is Severity.MANUAL and d.span is None for d in found)


def test_missing_pragma():
    found = _automatic(_lint_text("contract C { }\n"))
    assert [(d.rule_id, d.span.line, d.span.column) for d in found] == [("CL-PRAGMA", 1, 1)]


def test_diagnostics_carry_checklist_reference():
    unit = load_unit(os.path.join(VULNERABLE_DIR, "txorigin.sol"))
    diag = _automatic(lint(unit))[0]
    assert diag.severity is Severity.ERROR
    assert diag.checklist_ref == RULES["CL-TXORIGIN"].row
    assert diag.span.file.endswith("txorigin.sol")


def test_suppression_applies_to_the_next_line():
    text = TX_ORIGIN % "        // abcde:allow(CL-TXORIGIN)\n        require(tx.origin == owner);"
    assert _automatic(_lint_text(text)) == []


def test_suppression_on_the_same_line_does_not_apply():
    text = TX_ORIGIN % "        require(tx.origin == owner); // abcde:allow(CL-TXORIGIN)"
    assert [d.rule_id for d in _automatic(_lint_text(text))] == ["CL-TXORIGIN"]


def test_suppression_names_the_rule():
    text = TX_ORIGIN % "        // abcde:allow(CL-SHADOW)\n        require(tx.origin == owner);"
    assert [d.rule_id for d in _automatic(_lint_text(text))] == ["CL-TXORIGIN"]


def test_severity_override():
    unit = load_unit(os.path.join(VULNERABLE_DIR, "div.sol"))
    config = LintConfig(severity_overrides={"CL-DIV": Severity.ERROR})
    assert [d.severity for d in _automatic(lint(unit, config))] == [Severity.ERROR]


def test_enabled_rules_restrict_the_run():
    unit = load_unit(os.path.join(VULNERABLE_DIR, "txorigin.sol"))
    assert lint(unit, LintConfig(enabled_rules=frozenset({"CL-DIV"}))) == []


def test_overflow_rule_does_not_apply_from_0_8():
    text = read_text(os.path.join(VULNERABLE_DIR, "overflow.sol")).replace("0.5.16", "0.8.4")
    assert "CL-OVERFLOW" not in {d.rule_id for d in _lint_text(text)}


def test_safemath_silences_overflow():
    unit = load_unit(os.path.join(CLEAN_DIR, "overflow.sol"))
    assert "CL-OVERFLOW" not in {d.rule_id for d in lint(unit)}


def test_results_are_sorted_by_position():
    text = TX_ORIGIN % "        require(tx.origin == owner);\n        require(tx.origin != address(0));"
    found = _automatic(_lint_text(text))
    assert [d.span.line for d in found] == [8, 9]


@pytest.mark.parametrize("kwargs", [
    {"disabled_rules": frozenset({"CL-NOPE"})},
    {"fail_level": Severity.MANUAL},
    {"severity_overrides": {"CL-DIV": Severity.MANUAL}},
    {"severity_overrides": {"CL-FIXWARN": Severity.ERROR}},
])
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        LintConfig(**kwargs)


def test_config_helpers():
    assert parse_rule_list(" CL-DIV, CL-PRAGMA ,") == frozenset({"CL-DIV", "CL-PRAGMA"})
    assert parse_fail_level("Warning") is Severity.WARNING
    with pytest.raises(ConfigError):
        parse_fail_level("manual")
    with pytest.raises(ConfigError):
        parse_fail_level("loud")


def test_manual_items_never_meet_a_fail_level():
    assert not Severity.MANUAL.meets(Severity.INFO)
    assert Severity.WARNING.meets(Severity.INFO)
    assert not Severity.INFO.meets(Severity.WARNING)
