import pytest

from src.checks.config import LintConfig
from src.checks.diagnostics import Severity
from src.checks.gas import analyze_gas, is_default_value
from src.solidity.parser import parse_solidity

MANUAL_ITEMS = ["GA-EVENTLOG", "GA-SIZE", "GA-USELIB"]


def _gas(body, config=None):
    unit = parse_solidity(f"pragma solidity 0.5.16;\n\ncontract C {{\n{body}\n}}\n", file="g.sol")
    return analyze_gas(unit, config)


def _ids(body, config=None):
    return [d.rule_id for d in _gas(body, config) if d.severity is not Severity.MANUAL]


def test_empty_contract_yields_only_manual_items():
    found = _gas("")
    assert [d.rule_id for d in found] == MANUAL_ITEMS
    assert all(d.severity is Severity.MANUAL for d in found)


def test_default_initialization():
    found = [d for d in _gas("    uint256 total = 0;") if d.rule_id == "GA-INIT"]
    assert len(found) == 1
    assert (found[0].span.line, found[0].severity) == (4, Severity.WARNING)
    assert _ids("    uint256 total = 0;") == ["GA-INIT"]


def test_non_default_initialization():
    assert _ids("    uint256 total = 1;") == []


def test_long_revert_reason():
    body = '    function f(uint256 x) external pure {\n' \
           '        require(x > 0, "this revert reason is well over thirty-two bytes long");\n    }'
    assert _ids(body) == ["GA-LONGSTR"]


def test_reason_of_exactly_one_word():
    body = '    function f(uint256 x) external pure {\n' \
           '        require(x > 0, "abcdefghijklmnopqrstuvwxyz012345");\n    }'
    assert _ids(body) == []


def test_public_function_never_called_internally():
    assert _ids("    function f() public { }") == ["GA-PUBEXT"]


def test_public_function_called_internally():
    assert _ids("    function f() public { }\n    function g() external { f(); }") == []


def test_zero_assignment():
    body = "    address owner;\n    function reset() external { owner = address(0); }"
    assert _ids(body) == ["GA-ZEROASSIGN"]


def test_zero_assignment_to_local_is_fine():
    body = "    function f() external pure returns (uint256) { uint256 x = 1; x = 0; return x; }"
    assert _ids(body) == []


def test_storage_write_in_loop():
    body = (
        "    uint256 total;\n"
        "    function add(uint256[] calldata xs) external {\n"
        "        for (uint256 i; i < xs.length; i++) {\n"
        "            total += xs[i];\n"
        "        }\n"
        "    }"
    )
    found = [d for d in _gas(body) if d.severity is not Severity.MANUAL]
    assert [(d.rule_id, d.span.line) for d in found] == [("GA-LOOPSTORE", 7)]


def test_call_on_the_left_of_a_short_circuit():
    body = (
        "    function check() internal pure returns (bool) { return true; }\n"
        "    function ok(uint256 a) external pure returns (bool) { return check() && a > 0; }"
    )
    assert _ids(body) == ["GA-OPORDER"]


def test_cheap_operand_first():
    body = (
        "    function check() internal pure returns (bool) { return true; }\n"
        "    function ok(uint256 a) external pure returns (bool) { return a > 0 && check(); }"
    )
    assert _ids(body) == []


def test_dynamic_array():
    assert _ids("    address[] holders;") == ["GA-ARRAY"]


MODIFIER = (
    "    address owner;\n"
    "    bool paused;\n"
    "    modifier guarded() { require(msg.sender == owner); require(!paused); _; }\n"
)


def test_modifier_inlined_many_times():
    body = MODIFIER + "    function f() external guarded { }\n    function g() external guarded { }"
    assert _ids(body) == ["GA-MODINLINE"]


def test_modifier_used_once():
    assert _ids(MODIFIER + "    function f() external guarded { }") == []


def test_short_string_literal():
    body = '    string name;\n    constructor() public { name = "token"; }'
    assert _ids(body) == ["GA-BYTES32"]


def test_string_assigned_from_argument():
    body = "    string name;\n    function rename(string calldata value) external { name = value; }"
    assert _ids(body) == []


def test_packing_opportunity():
    found = [d for d in _gas("    uint128 a;\n    uint256 b;\n    uint128 c;") if d.rule_id == "GA-PACK"]
    assert len(found) == 1
    assert "b, a, c" in found[0].message
    assert "needs 2" in found[0].message


def test_disabled_rule():
    body = "    uint128 a;\n    uint256 b;\n    uint128 c;"
    assert _ids(body, LintConfig(disabled_rules=frozenset({"GA-PACK"}))) == []


@pytest.mark.parametrize("text, expected", [
    ("0", True), ("false", True), ('""', True), ("address(0)", True), ("uint8(0)", True),
    ("1", False), ("true", False), ("address(1)", False),
])
def test_default_values(text, expected):
    unit = parse_solidity(f"contract C {{ function f() external {{ x = {text}; }} }}")
    statement = unit.contract("C").functions[0].body.statements[0]
    assert is_default_value(statement.expr.value) is expected
