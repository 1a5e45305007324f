import random

import pytest

from src.dsl.formatter import format_model
from src.dsl.lexer import quote, unquote
from src.dsl.parser import parse_model
from src.model.errors import ModelSyntaxError
from src.model.typenames import (
    ArrayTypeName,
    Collection,
    ElementaryTypeName,
    MappingTypeName,
    UserDefinedTypeName,
)
from src.model.types import (
    ActorDecl,
    ActorKind,
    ContractDecl,
    ContractKind,
    EnumDecl,
    EventDecl,
    FunctionSig,
    Message,
    MessageKind,
    ModifierDecl,
    Mutability,
    Param,
    Participant,
    PatternId,
    Scenario,
    StateVar,
    StructDecl,
    SystemModel,
    Visibility,
)

ELEMENTARY = ["address", "bool", "string", "bytes", "bytes32", "bytes4", "uint256", "uint8",
              "int128", "uint64"]
LABEL_CHARS = 'abcXYZ 0123(),.:;[]{}-_"\\\n'


def _name(rng, prefix):
    return f"{prefix}{rng.randrange(10000)}"


def _type(rng, depth=0):
    roll = rng.random()
    if depth < 2 and roll < 0.15:
        return MappingTypeName(ElementaryTypeName(rng.choice(["address", "uint256", "bytes32"])),
                               _type(rng, depth + 1))
    if depth < 2 and roll < 0.3:
        return ArrayTypeName(_type(rng, depth + 1), rng.choice([None, 1, 3, 10]))
    if roll < 0.4:
        return UserDefinedTypeName(_name(rng, "T"))
    return ElementaryTypeName(rng.choice(ELEMENTARY))


def _params(rng, prefix="p"):
    return tuple(Param(f"{prefix}{i}", _type(rng)) for i in range(rng.randrange(4)))


def _text(rng):
    return "".join(rng.choice(LABEL_CHARS) for _ in range(rng.randrange(12)))


def _function(rng, has_body):
    return FunctionSig(
        name=_name(rng, "f"),
        params=_params(rng),
        returns=tuple(_type(rng) for _ in range(rng.randrange(3))),
        visibility=rng.choice(list(Visibility)),
        mutability=rng.choice(list(Mutability)),
        applied_modifiers=tuple(_name(rng, "m") for _ in range(rng.randrange(3))),
        has_body=has_body,
    )


def _contract(rng):
    kind = rng.choice([ContractKind.CONTRACT, ContractKind.INTERFACE, ContractKind.LIBRARY_CONTRACT])
    has_body = kind is not ContractKind.INTERFACE
    return ContractDecl(
        name=_name(rng, "C"),
        stereotype=kind,
        parents=tuple(_name(rng, "C") for _ in range(rng.randrange(3))),
        state_vars=tuple(
            StateVar(f"v{i}", _type(rng), rng.choice(list(Visibility)[:1] + list(Visibility)[2:]))
            for i in range(rng.randrange(4))
        ),
        events=tuple(EventDecl(f"E{i}", _params(rng)) for i in range(rng.randrange(3))),
        modifiers=tuple(
            ModifierDecl(f"m{i}", _params(rng), rng.choice([None, _text(rng)]))
            for i in range(rng.randrange(3))
        ),
        functions=tuple(_function(rng, has_body) for _ in range(rng.randrange(4))),
        pattern_tags=frozenset(rng.sample(list(PatternId), rng.randrange(3))),
    )


def _scenario(rng):
    participants = []
    for i in range(rng.randrange(1, 4)):
        kind = rng.choice(list(ActorKind))
        bound = _name(rng, "C") if kind is ActorKind.CONTRACT and rng.random() < 0.5 else None
        participants.append(Participant(f"P{i}", kind, bound))
    aliases = [p.alias for p in participants]
    messages = tuple(
        Message(rng.choice(aliases), rng.choice(aliases), _text(rng), rng.choice(list(MessageKind)),
                rng.random() < 0.2)
        for _ in range(rng.randrange(5))
    )
    return Scenario(_name(rng, "S"), tuple(participants), messages)


def _declaration(rng):
    roll = rng.random()
    if roll < 0.15:
        return StructDecl(_name(rng, "T"), _params(rng, "x"))
    if roll < 0.25:
        return EnumDecl(_name(rng, "T"), tuple(f"K{i}" for i in range(rng.randrange(1, 4))))
    return _contract(rng)


def _random_model(rng):
    return SystemModel(
        name=_name(rng, "Sys"),
        goal=rng.choice([None, _text(rng)]),
        actors=tuple(ActorDecl(f"A{i}", rng.choice(list(ActorKind))) for i in range(rng.randrange(3))),
        declarations=tuple(_declaration(rng) for _ in range(rng.randrange(5))),
        scenarios=tuple(_scenario(rng) for _ in range(rng.randrange(3))),
    )


def test_format_then_parse_is_identity_on_random_models():
    rng = random.Random(20240601)
    for _ in range(100):
        model = _random_model(rng)
        text = format_model(model)
        assert parse_model(text) == model, text


def test_format_is_stable(dex_model):
    text = format_model(dex_model)
    assert format_model(parse_model(text)) == text


def test_dex_model_declarations(dex_model):
    assert dex_model.name == "DEX"
    assert [c.name for c in dex_model.contracts] == ["Ownable", "ReentrancyGuard", "IERC20", "Exchange"]
    assert [s.name for s in dex_model.structs] == ["Order"]
    exchange = dex_model.contract("Exchange")
    assert exchange.parents == ("Ownable", "ReentrancyGuard")
    assert len(exchange.modifiers) == 3
    assert len(exchange.events) == 5
    assert exchange.modifiers[0].guard == "the sender is the owner of the contract"
    assert [s.name for s in dex_model.scenarios] == ["FillOrder", "CancelOrder"]


def test_interface_functions_have_no_body(dex_model):
    iface = dex_model.contract("IERC20")
    assert iface.stereotype is ContractKind.INTERFACE
    assert all(not f.has_body for f in iface.functions)
    assert iface.functions[1].mutability is Mutability.VIEW
    assert all(f.has_body for f in dex_model.contract("Exchange").functions)


def test_state_variable_collections(dex_model):
    by_name = {v.name: v for v in dex_model.contract("Exchange").state_vars}
    assert by_name["filled"].collection is Collection.MAPPING
    assert by_name["orderEpoch"].collection is Collection.MAPPING_ADDRESS
    assert by_name["authorities"].collection is Collection.ARRAY
    assert by_name["authorities"].visibility is Visibility.INTERNAL
    assert by_name["filled"].visibility is Visibility.PUBLIC


def test_participant_binding(dex_model):
    scenario = dex_model.scenario("FillOrder")
    assert scenario.participant("DEX").contract == "Exchange"
    assert scenario.participant("Taker").contract is None
    assert scenario.messages[0].kind is MessageKind.TRANS_MSG


def test_empty_system():
    model = parse_model("system S {}")
    assert model == SystemModel("S")
    assert format_model(model) == "system S {\n}\n"


def test_missing_parent_reports_position():
    text = "system S {\n    contract X is {\n    }\n}\n"
    with pytest.raises(ModelSyntaxError) as info:
        parse_model(text, file="bad.abcde")
    first = info.value.errors[0]
    assert first.expected == "identifier"
    assert (first.span.line, first.span.column) == (2, 19)
    assert first.span.file == "bad.abcde"


def test_every_error_is_collected():
    text = "system S {\n    contract A { bogus }\n    contract B is { }\n}\n"
    with pytest.raises(ModelSyntaxError) as info:
        parse_model(text)
    assert [e.span.line for e in info.value.errors] == [2, 3]


def test_unterminated_string():
    with pytest.raises(ModelSyntaxError) as info:
        parse_model('system S {\n    goal "open\n}\n')
    assert info.value.errors[0].span.line == 2


def test_unknown_pattern_is_rejected():
    with pytest.raises(ModelSyntaxError) as info:
        parse_model("system S { contract A @pattern(XYZ) { } }")
    assert info.value.errors[0].expected == "pattern id"


def test_mapping_address_is_formatted():
    model = SystemModel("S", declarations=(ContractDecl(
        "Bank",
        state_vars=(StateVar("balances", MappingTypeName(ElementaryTypeName("address"),
                                                         ElementaryTypeName("uint256"))),),
    ),))
    text = format_model(model)
    assert "mapping(address =>" in text
    assert parse_model(text).contract("Bank").state_vars[0].collection is Collection.MAPPING_ADDRESS


def test_declaration_spans_follow_source_order(dex_model):
    lines = [d.span.line for d in dex_model.declarations]
    assert lines == sorted(lines)
    assert all(d.span.file.endswith("dex.abcde") for d in dex_model.declarations)


def test_crlf_input_parses_to_equal_model(dex_path, dex_model):
    with open(dex_path, encoding="utf-8") as f:
        text = f.read()
    assert parse_model(text.replace("\n", "\r\n").encode("utf-8")) == dex_model


def test_uint_alias_is_normalized():
    model = parse_model("system S { contract A { state { n: uint } } }")
    assert str(model.contract("A").state_vars[0].type_name) == "uint256"


@pytest.mark.parametrize("text", ['plain', 'with "quotes"', "back\\slash", "two\nlines", "car\rriage", ""])
def test_quote_unquote(text):
    assert unquote(quote(text)) == text


def test_carriage_return_in_label_survives_formatting():
    text = (
        "system S {\n"
        "    contract A { }\n"
        "    scenario Run {\n"
        "        participant U : person\n"
        "        participant C : contract A\n"
        '        U -> C : "first\\r\\nsecond\\rthird" [trans-msg]\n'
        "    }\n"
        "}\n"
    )
    model = parse_model(text)
    assert model.scenario("Run").messages[0].label == "first\r\nsecond\rthird"
    formatted = format_model(model)
    assert "\r" not in formatted
    assert parse_model(formatted) == model
