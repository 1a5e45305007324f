import random

import pytest

from src.checks.design import check_multiple_inheritance
from src.dsl.parser import parse_model
from src.model.errors import CycleError, LinearizationError, UnknownContract
from src.model.inheritance import c3_linearize, effective_interface, linearize


def _model(body):
    return parse_model(f"system S {{\n{body}\n}}\n")


DIAMOND = """
    contract A { functions { f() public } }
    contract B is A { functions { f() public } }
    contract C is A { functions { f() public } }
    contract D is B, C { }
"""


def test_diamond_linearization():
    assert linearize(_model(DIAMOND), "D") == ["D", "C", "B", "A"]


def test_contract_without_parents():
    assert linearize(_model("contract A { }"), "A") == ["A"]


def test_unknown_contract():
    with pytest.raises(UnknownContract):
        linearize(_model("contract A { }"), "Missing")


def test_cycle_is_reported():
    with pytest.raises(CycleError) as info:
        linearize(_model("contract A is B { }\ncontract B is A { }"), "A")
    assert info.value.cycle[0] == info.value.cycle[-1]


def test_inconsistent_hierarchy():
    body = "contract X { }\ncontract Y { }\ncontract A is X, Y { }\ncontract B is Y, X { }\ncontract Z is A, B { }"
    with pytest.raises(LinearizationError) as info:
        linearize(_model(body), "Z")
    assert info.value.contract == "Z"


def test_c3_on_plain_table():
    table = {"O": (), "A": ("O",), "B": ("O",), "C": ("A", "B")}
    assert c3_linearize("C", table.get) == ["C", "B", "A", "O"]


def test_override_is_a_related_collision():
    model = _model("contract P { functions { f() public } }\ncontract Q is P { functions { f() external } }")
    iface = effective_interface(model, "Q")
    assert iface.owner_of("f") == "Q"
    assert len(iface.functions) == 1
    assert [(c.first, c.second, c.related) for c in iface.collisions] == [("Q", "P", True)]
    assert check_multiple_inheritance(model) == []


def test_diamond_clash_is_unrelated():
    model = _model(DIAMOND)
    iface = effective_interface(model, "D")
    assert iface.owner_of("f") == "C"
    unrelated = [c for c in iface.collisions if not c.related]
    assert [c.pair for c in unrelated] == [frozenset({"B", "C"})]
    diags = check_multiple_inheritance(model)
    assert [d.rule_id for d in diags] == ["DC-MI"]


def test_inherited_functions_are_collected():
    model = _model("contract P { functions { f() public } }\ncontract Q is P { functions { g() public } }")
    iface = effective_interface(model, "Q")
    assert {f.signature.name: f.owner for f in iface.functions} == {"g": "Q", "f": "P"}
    assert iface.collisions == ()


def _dfs_path(parents, name):
    path = [name]
    while parents[path[-1]]:
        path.append(parents[path[-1]][0])
    return path


def test_single_inheritance_chains_follow_the_parent_path():
    rng = random.Random(7)
    for _ in range(50):
        size = rng.randrange(1, 12)
        parents = {}
        for i in range(size):
            name = f"K{i}"
            parents[name] = (f"K{rng.randrange(i)}",) if i and rng.random() < 0.8 else ()
        for name in parents:
            assert c3_linearize(name, parents.get) == _dfs_path(parents, name)
