import os
import random

import pytest

from src.dsl.parser import parse_model
from src.model.errors import SoliditySyntaxError, SourceSyntaxError, UnknownContract
from src.model.typenames import ArrayTypeName, Collection, MappingTypeName, collection_of
from src.model.types import Mutability, Visibility
from src.solidity import ast
from src.solidity.parser import parse_solidity
from tests.conftest import CLEAN_DIR, MODELS_DIR, VULNERABLE_DIR, read_text, sol_files

SAMPLE = """pragma solidity 0.5.16;
pragma experimental ABIEncoderV2;

import "./Ownable.sol";

contract Exchange is Ownable {
    using SafeMath for uint256;

    struct Order { address maker; uint256 amount; }
    enum State { Open, Closed }

    mapping(bytes32 => uint256) public filled;
    uint256 constant FEE = 3;
    address[] authorities;

    event Fill(address indexed maker, bytes32 orderHash);

    modifier onlyOwner() {
        require(msg.sender == owner);
        _;
    }

    constructor() public {
        owner = msg.sender;
    }

    function() external payable { }

    function fill(bytes32 orderHash, uint256 amount) public onlyOwner returns (uint256) {
        filled[orderHash] = filled[orderHash].add(amount);
        emit Fill(msg.sender, orderHash);
        return amount;
    }

    function peek(bytes32 orderHash) external view returns (uint256) {
        assembly { let x := 1 }
        return filled[orderHash];
    }
}
"""


def _unit(text=SAMPLE):
    return parse_solidity(text, file="Exchange.sol")


def _statements(func):
    return func.body.statements


def test_pragma_directive():
    unit = _unit()
    assert unit.pragma.raw == "0.5.16"
    assert unit.pragma.locked
    assert unit.pragma.version == (0, 5, 16)
    assert unit.pragma.span.line == 1


@pytest.mark.parametrize("raw, locked", [("^0.5.0", False), ("0.5.16", True), (">=0.4.22 <0.6.0", False),
                                         ("=0.8.4", True)])
def test_pragma_lock(raw, locked):
    unit = parse_solidity(f"pragma solidity {raw};\ncontract C {{ }}\n")
    assert unit.pragma.locked is locked


def test_missing_pragma():
    assert parse_solidity("contract C { }").pragma is None


def test_imports():
    assert _unit().imports == ("./Ownable.sol",)


def test_contract_members():
    contract = _unit().contract("Exchange")
    assert contract.kind is ast.ContractDefKind.CONTRACT
    assert contract.parents == ("Ownable",)
    assert [v.name for v in contract.state_vars] == ["filled", "FEE", "authorities"]
    assert [m.name for m in contract.modifiers] == ["onlyOwner"]
    assert [e.name for e in contract.events] == ["Fill"]
    assert [s.name for s in contract.structs] == ["Order"]
    assert contract.enums[0].members == ("Open", "Closed")
    assert contract.using_declarations[0].library == "SafeMath"


def test_mapping_state_variable():
    filled = _unit().contract("Exchange").state_vars[0]
    assert isinstance(filled, ast.VarDecl)
    assert isinstance(filled.type_name, MappingTypeName)
    assert str(filled.type_name) == "mapping(bytes32 => uint256)"
    assert filled.visibility is Visibility.PUBLIC
    assert collection_of(filled.type_name) is Collection.MAPPING
    assert filled.span.line == 12


def test_constant_takes_no_storage():
    contract = _unit().contract("Exchange")
    fee = contract.state_vars[1]
    assert fee.is_constant and not fee.occupies_storage
    assert isinstance(contract.state_vars[2].type_name, ArrayTypeName)


def test_special_functions():
    contract = _unit().contract("Exchange")
    assert contract.functions[0].is_constructor
    assert contract.fallback() is contract.functions[1]
    assert contract.functions[1].mutability is Mutability.PAYABLE
    assert contract.functions[1].visibility is Visibility.EXTERNAL


def test_function_signature():
    fill = _unit().contract("Exchange").function("fill")
    assert [p.name for p in fill.params] == ["orderHash", "amount"]
    assert fill.applied_modifiers == ("onlyOwner",)
    assert str(fill.returns[0].type_name) == "uint256"
    assert fill.span.line == 29
    assert fill.span.column == 5


def test_statement_spans():
    fill = _unit().contract("Exchange").function("fill")
    assign, emit, ret = _statements(fill)
    assert isinstance(assign, ast.ExprStmt)
    assert isinstance(emit, ast.EmitEvent)
    assert isinstance(ret, ast.Return)
    call = assign.expr.value
    assert isinstance(call, ast.Call)
    # a call's span starts at its base expression
    assert (call.span.line, call.span.column) == (30, 29)
    assert (assign.span.line, assign.span.column) == (30, 9)


def test_unsupported_statement_is_opaque():
    peek = _unit().contract("Exchange").function("peek")
    first, second = _statements(peek)
    assert isinstance(first, ast.Opaque)
    assert isinstance(second, ast.Return)


def test_old_style_constructor():
    unit = parse_solidity("contract Bank { function Bank() public { } }")
    assert unit.contract("Bank").functions[0].is_constructor


def test_unit_linearization():
    text = "contract A { } contract B is A { } contract C is A { } contract D is B, C { }"
    unit = parse_solidity(text)
    assert [c.name for c in unit.linearize("D")] == ["D", "C", "B", "A"]
    with pytest.raises(UnknownContract):
        parse_solidity("contract D is Missing { }").linearize("D")


def test_suppression_comments():
    text = "contract C {\n    // abcde:allow(CL-TXORIGIN)\n    uint256 x;\n}\n"
    unit = parse_solidity(text)
    assert unit.suppressions == {3: frozenset({"CL-TXORIGIN"})}
    var = unit.contract("C").state_vars[0]
    assert unit.is_suppressed("CL-TXORIGIN", var.span)
    assert not unit.is_suppressed("CL-SHADOW", var.span)


def test_unbalanced_braces():
    with pytest.raises(SoliditySyntaxError) as info:
        parse_solidity("contract C {\n    function f() public {\n", file="broken.sol")
    assert info.value.errors
    assert info.value.errors[0].span.file == "broken.sol"


def test_duplicate_contract_name():
    with pytest.raises(SoliditySyntaxError):
        parse_solidity("contract C { } contract C { }")


@pytest.mark.parametrize("source", [
    "contract C { uint[0x_] a; }",
    "contract C { uint[0x] a; }",
    "contract C { uint a = 0x; }",
])
def test_hex_literal_without_digits(source):
    with pytest.raises(SoliditySyntaxError) as info:
        parse_solidity(source)
    assert info.value.errors[0].expected == "hex digits"


def test_hex_array_length():
    var = parse_solidity("contract C { uint8[0x1_0] a; }").contract("C").state_vars[0]
    assert isinstance(var.type_name, ArrayTypeName)
    assert var.type_name.length == 16


def test_two_fallbacks():
    with pytest.raises(SoliditySyntaxError):
        parse_solidity("contract C { function() external { } function() external { } }")


def test_crlf_and_bytes_input():
    unit = parse_solidity(SAMPLE.replace("\n", "\r\n").encode("utf-8"), file="Exchange.sol")
    assert unit == _unit()


def test_fixture_corpus_parses():
    for directory in (VULNERABLE_DIR, CLEAN_DIR):
        for name in sol_files(directory):
            path = os.path.join(directory, name)
            unit = parse_solidity(read_text(path), file=path)
            assert unit.contracts, name


FUZZ_TOKENS = [
    "contract", "interface", "library", "function", "modifier", "event", "struct", "enum",
    "mapping", "(", ")", "{", "}", "[", "]", ";", ",", "=>", "=", ".", "uint256", "address",
    "public", "returns", "if", "for", "while", "return", "emit", "x", "y", "1", "0x1",
    '"s"', "+", "*", "<", "!", "pragma solidity ^0.5.0;", "system", "state", "functions",
    "scenario", "participant", "->", "-->", ":", '"label"', "[trans-msg]", "@pattern(ES)",
    "is", "//", "\n", "unchecked", "assembly", "new", "0x_", "0x", "uint[0x_]",
]


def _fuzz_text(rng):
    return " ".join(rng.choice(FUZZ_TOKENS) for _ in range(rng.randrange(40)))


def _mutated(rng, text):
    chars = list(text)
    for _ in range(rng.randrange(1, 6)):
        if chars:
            del chars[rng.randrange(len(chars))]
    return "".join(chars)


def test_parsers_fail_only_with_syntax_errors():
    rng = random.Random(1234)
    seeds = [SAMPLE, read_text(os.path.join(MODELS_DIR, "dex.abcde"))]
    for i in range(10000):
        text = _fuzz_text(rng) if i % 2 else _mutated(rng, seeds[i % 4 // 2])
        for parse in (parse_solidity, parse_model):
            try:
                parse(text)
            except SourceSyntaxError:
                pass
