import pytest

from src.checks.diagnostics import Severity
from src.checks.lint import lint
from src.dsl.parser import parse_model
from src.generators.scaffold import ScaffoldConfig, generate_solidity, parse_version
from src.model.errors import ConfigError
from src.solidity.parser import parse_solidity

DEX_FILES = {"DEXTypes.sol", "Ownable.sol", "ReentrancyGuard.sol", "IERC20.sol", "Exchange.sol"}


def _scaffold(text, **options):
    return generate_solidity(parse_model(text), ScaffoldConfig(**options))


def test_empty_contract():
    files = _scaffold("system S { contract C { } }")
    assert files == {"C.sol": "pragma solidity 0.5.16;\n\ncontract C {\n}\n"}


def test_dex_file_set(dex_model):
    assert set(generate_solidity(dex_model)) == DEX_FILES


def test_exchange_skeleton(dex_model):
    text = generate_solidity(dex_model)["Exchange.sol"]
    assert text.startswith("pragma solidity 0.5.16;\npragma experimental ABIEncoderV2;\n")
    assert '\nimport "./DEXTypes.sol";\nimport "./Ownable.sol";\nimport "./ReentrancyGuard.sol";\n' in text
    assert "\ncontract Exchange is Ownable, ReentrancyGuard {\n" in text
    assert "\n    mapping(address => bool) public authorized;\n" in text
    assert "\n        return bytes32(0);\n" in text
    assert 'revert("not implemented");' in text

    exchange = parse_solidity(text, file="Exchange.sol").contract("Exchange")
    assert [m.name for m in exchange.modifiers] == ["onlyOwner", "nonReentrant", "onlyAuthorized"]
    assert len(exchange.events) == 5
    assert [f.name for f in exchange.functions] == [
        "fillOrder",
        "cancelOrder",
        "cancelOrdersUpTo",
        "getOrderHash",
        "addAuthorizedAddress",
        "removeAuthorizedAddress",
        "dispatchTransferFrom",
    ]
    assert exchange.function("fillOrder").applied_modifiers == ("nonReentrant",)


def test_struct_parameters_are_qualified(dex_model):
    text = generate_solidity(dex_model)["Exchange.sol"]
    assert "function cancelOrder(DEXTypes.Order memory order) public nonReentrant {" in text
    types = generate_solidity(dex_model)["DEXTypes.sol"]
    assert "library DEXTypes {\n    struct Order {\n        address makerAddress;\n" in types


def test_interface_functions_have_no_body(dex_model):
    text = generate_solidity(dex_model)["IERC20.sol"]
    assert "    function balanceOf(address holder) external view returns (uint256);\n" in text
    assert "{\n        " not in text


def test_generated_sources_parse_and_lint_without_errors(dex_model, dao_model):
    for model in (dex_model, dao_model):
        for name, text in generate_solidity(model).items():
            unit = parse_solidity(text, file=name)
            assert unit.pragma.locked
            errors = [d for d in lint(unit) if d.severity is Severity.ERROR]
            assert errors == [], name


def test_generation_is_deterministic(dex_model):
    assert generate_solidity(dex_model) == generate_solidity(dex_model)


def test_single_file_mode(dex_model):
    files = generate_solidity(dex_model, ScaffoldConfig(one_file_per_contract=False))
    assert list(files) == ["DEX.sol"]
    unit = parse_solidity(files["DEX.sol"])
    assert [c.name for c in unit.contracts] == ["DEXTypes", "Ownable", "ReentrancyGuard", "IERC20", "Exchange"]
    assert "import" not in files["DEX.sol"]


def test_parents_come_before_children():
    files = _scaffold("system S { contract B is A { } contract A { } }", one_file_per_contract=False)
    unit = parse_solidity(files["S.sol"])
    assert [c.name for c in unit.contracts] == ["A", "B"]


@pytest.mark.parametrize("version, head", [((0, 5, 16), "function()"), ((0, 6, 0), "fallback()")])
def test_fallback_spelling_follows_the_compiler(version, head):
    files = _scaffold("system S { contract C { functions { fallback() external payable } } }", solidity_version=version)
    assert f"\n    {head} external payable {{\n" in files["C.sol"]


def test_license_header():
    files = _scaffold("system S { contract C { } }", license_header="SPDX-License-Identifier: MIT")
    assert files["C.sol"].startswith("// SPDX-License-Identifier: MIT\npragma solidity 0.5.16;\n")


def test_constructor_stub_is_empty():
    files = _scaffold("system S { contract C { functions { constructor(owner: address) public } } }")
    assert "    constructor(address owner) public {\n    }\n" in files["C.sol"]


def test_modifier_stub_keeps_its_guard(dex_model):
    text = generate_solidity(dex_model)["Exchange.sol"]
    assert "    // guard: the sender is the owner of the contract\n    modifier onlyOwner() {\n" in text


@pytest.mark.parametrize("guard", ["owner only\\nand not paused", "owner only\\r\\nand not paused"])
def test_multiline_guard_stays_in_comments(guard):
    text = f'system S {{ contract C {{ modifiers {{ onlyOwner "{guard}" }} }} }}'
    source = _scaffold(text)["C.sol"]
    assert "    // guard: owner only\n    // and not paused\n    modifier onlyOwner() {\n" in source
    unit = parse_solidity(source)
    assert [m.name for m in unit.contract("C").modifiers] == ["onlyOwner"]


def test_parse_version():
    assert parse_version("0.8.4") == (0, 8, 4)
    for text in ("^0.5.0", "0.5", ">=0.4.22 <0.6.0", "v0.5.16"):
        with pytest.raises(ConfigError):
            parse_version(text)


def test_invalid_scaffold_config():
    with pytest.raises(ConfigError):
        ScaffoldConfig(solidity_version=(0, 5))
