import pytest

from src.checks.diagnostics import Severity
from src.dsl.parser import parse_model
from src.model.types import SystemModel
from src.model.validation import validate_model


def _rule_ids(text):
    return [d.rule_id for d in validate_model(parse_model(text))]


def _scenario(body, participants):
    decls = "\n".join(f"        participant {alias} : {kind}" for alias, kind in participants)
    return (
        "system S {\n"
        "    contract Bank { }\n"
        "    contract Other { }\n"
        "    scenario Run {\n"
        f"{decls}\n"
        f"{body}\n"
        "    }\n"
        "}\n"
    )


def test_well_formed_models_have_no_diagnostics(dex_model, dao_model):
    assert validate_model(SystemModel("S")) == []
    assert validate_model(dex_model) == []
    assert validate_model(dao_model) == []


def test_validation_is_idempotent(dex_model):
    text = "system S { contract A is Missing { } contract A { } }"
    model = parse_model(text)
    assert validate_model(model) == validate_model(model)
    assert validate_model(dex_model) == validate_model(dex_model)


def test_duplicate_declaration_name():
    diags = validate_model(parse_model("system S {\n contract A { }\n struct A { x: uint256 }\n}\n"))
    assert [d.rule_id for d in diags] == ["MOD-DUP-NAME"]
    assert diags[0].span.line == 3
    assert diags[0].severity is Severity.ERROR


def test_unknown_parent():
    assert _rule_ids("system S { contract A is Missing { } }") == ["MOD-UNKNOWN-PARENT"]


def test_inheritance_cycle():
    ids = _rule_ids("system S { contract A is B { } contract B is A { } }")
    assert ids == ["MOD-INHERITANCE", "MOD-INHERITANCE"]


def test_unknown_type():
    assert _rule_ids("system S { contract A { state { o: Order } } }") == ["MOD-UNKNOWN-TYPE"]


def test_struct_as_mapping_key():
    text = "system S { struct K { a: uint256 } contract A { state { m: mapping(K => uint256) } } }"
    assert _rule_ids(text) == ["MOD-MAPPING-KEY"]


def test_interface_with_state():
    text = "system S { interface I { state { x: uint256 } } }"
    assert _rule_ids(text) == ["MOD-IFACE-STATE"]


def test_undeclared_modifier():
    text = "system S { contract A { functions { f() public uses (onlyOwner) } } }"
    assert _rule_ids(text) == ["MOD-UNKNOWN-MODIFIER"]


def test_inherited_modifier_is_known():
    text = (
        "system S { contract Base { modifiers { onlyOwner } }"
        " contract A is Base { functions { f() public uses (onlyOwner) } } }"
    )
    assert _rule_ids(text) == []


def test_duplicate_member():
    text = "system S { contract A { state { x: uint256 } events { x() } } }"
    assert _rule_ids(text) == ["MOD-DUP-MEMBER"]


def test_reserved_name():
    assert _rule_ids("system S { contract A { state { now: uint256 } } }") == ["MOD-RESERVED-NAME"]


def test_repeated_enum_member():
    assert _rule_ids("system S { enum E { A, A } }") == ["MOD-ENUM-MEMBER"]


def test_transaction_from_contract():
    text = _scenario('        B -> O : "f()" [trans-msg]', [("B", "contract Bank"), ("O", "contract Other")])
    assert _rule_ids(text) == ["MOD-TRANSMSG-SOURCE"]


def test_transaction_to_person():
    text = _scenario('        U -> V : "f()" [trans-msg]', [("U", "person"), ("V", "person")])
    assert _rule_ids(text) == ["MOD-TRANSMSG-TARGET"]


def test_oracle_is_a_transaction_target():
    text = _scenario('        U -> O : "update()" [trans-msg]', [("U", "person"), ("O", "oracle")])
    assert _rule_ids(text) == []


def test_direct_message_from_person():
    text = _scenario('        U -> B : "f()" [direct-msg]', [("U", "person"), ("B", "contract Bank")])
    assert "MOD-DIRECTMSG" in _rule_ids(text)


def test_fallback_must_target_the_sender():
    text = _scenario(
        '        U -> B : "f()" [trans-msg]\n        B -> O : "" [fallback]',
        [("U", "person"), ("B", "contract Bank"), ("O", "contract Other")],
    )
    assert _rule_ids(text) == ["MOD-FALLBACK-SELF"]


def test_account_exchanges_only_ether():
    text = _scenario(
        '        U -> B : "f()" [trans-msg]\n        B -> W : "pay()" [direct-msg]',
        [("U", "person"), ("B", "contract Bank"), ("W", "account")],
    )
    assert "MOD-ACCOUNT-ETHERS" in _rule_ids(text)


def test_account_may_receive_ether():
    text = _scenario(
        '        U -> B : "withdraw()" [trans-msg]\n        B --> W : "1 ether" [ethers]',
        [("U", "person"), ("B", "contract Bank"), ("W", "account")],
    )
    assert _rule_ids(text) == []


def test_dashed_arrow_needs_ether_kind():
    text = _scenario('        U --> B : "f()" [trans-msg]', [("U", "person"), ("B", "contract Bank")])
    assert _rule_ids(text) == ["MOD-DASHED-KIND"]


def test_unknown_message_endpoint():
    text = _scenario('        U -> Nobody : "f()" [trans-msg]', [("U", "person")])
    assert _rule_ids(text) == ["MOD-MSG-ENDPOINT"]


def test_participant_bound_to_missing_contract():
    text = _scenario("", [("X", "contract Missing")])
    assert _rule_ids(text) == ["MOD-PART-CONTRACT"]


def test_inactive_sender():
    text = _scenario(
        '        U -> B : "f()" [trans-msg]\n        O -> B : "g()" [direct-msg]',
        [("U", "person"), ("B", "contract Bank"), ("O", "contract Other")],
    )
    diags = validate_model(parse_model(text))
    assert [d.rule_id for d in diags] == ["MOD-ACTIVATION"]
    assert diags[0].path == "scenario Run / message 2"


@pytest.mark.parametrize("kind", ["view", "pure", "create"])
def test_calls_target_contracts(kind):
    text = _scenario(f'        U -> V : "f()" [{kind}]', [("U", "person"), ("V", "person")])
    assert _rule_ids(text) == ["MOD-CALL-TARGET"]


def test_diagnostics_follow_declaration_order():
    text = "system S {\n contract B is Missing { }\n contract A { state { o: Gone } }\n}\n"
    diags = validate_model(parse_model(text))
    assert [d.rule_id for d in diags] == ["MOD-UNKNOWN-PARENT", "MOD-UNKNOWN-TYPE"]
