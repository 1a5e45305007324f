import itertools
import math
import os
import random

from src.checks.packing import first_fit_decreasing, layout_document, suggest_packing
from src.solidity.layout import StorageItem, assign_slots, storage_items
from src.solidity.parser import parse_solidity
from tests.conftest import LAYOUT_DIR, load_unit

CORPUS = ("basic.sol", "advanced.sol")


def _suggest(text, name="C"):
    unit = parse_solidity(text)
    return suggest_packing(unit.contract(name), unit)


def _optimum(items, contract=""):
    """Fewest slots over every order of each run of movable items, pinned items left at their index"""
    movable = [i for i, item in enumerate(items) if item.packable and item.contract == contract]
    runs = []
    for index in movable:
        if runs and runs[-1][-1] == index - 1:
            runs[-1].append(index)
        else:
            runs.append([index])
    best = None
    for choice in itertools.product(*(itertools.permutations(run) for run in runs)):
        order = list(items)
        for run, permuted in zip(runs, choice):
            for slot_index, source in zip(run, permuted):
                order[slot_index] = items[source]
        total = assign_slots(order).total_slots
        best = total if best is None else min(best, total)
    return best


def _corpus():
    for file_name in CORPUS:
        unit = load_unit(os.path.join(LAYOUT_DIR, file_name))
        for contract in unit.contracts:
            yield contract, unit


def test_spread_halves_are_packed():
    suggestion = _suggest("contract C { uint128 a; uint256 b; uint128 c; }")
    assert suggestion.current_slots == 3
    assert suggestion.achievable_slots == 2
    assert suggestion.improves
    assert suggestion.suggested_order == ("b", "a", "c")


def test_packed_contract_is_left_alone():
    suggestion = _suggest("contract C { uint128 a; uint128 b; }")
    assert (suggestion.current_slots, suggestion.achievable_slots) == (1, 1)
    assert not suggestion.improves
    assert suggestion.suggested_order == ("a", "b")


def test_empty_contract():
    suggestion = _suggest("contract C { }")
    assert (suggestion.current_slots, suggestion.achievable_slots) == (0, 0)
    assert suggestion.suggested_order == ()


def test_dynamic_variable_stays_in_place():
    suggestion = _suggest("contract C { bool a; string s; bool b; }")
    assert (suggestion.current_slots, suggestion.achievable_slots) == (3, 3)
    assert not suggestion.improves
    assert suggestion.layout_order == ("a", "s", "b")


def test_runs_between_pinned_variables_pack_separately():
    text = "contract C { uint128 a; uint256 b; uint128 c; mapping(address => uint) m; uint8 d; uint256 e; uint8 f; }"
    suggestion = _suggest(text)
    assert (suggestion.current_slots, suggestion.achievable_slots) == (7, 5)
    assert suggestion.layout_order == ("b", "a", "c", "m", "e", "d", "f")
    assert suggestion.suggested_order == ("b", "a", "c", "e", "d", "f")


def test_struct_keeps_its_index():
    text = "contract C { struct P { uint a; } uint8 x; P p; uint8 y; uint8 z; }"
    suggestion = _suggest(text)
    assert suggestion.layout_order.index("p") == 1
    assert suggestion.achievable_slots == suggestion.current_slots == 3


def test_inherited_variables_are_not_moved():
    text = "contract A { uint8 a1; uint256 a2; uint8 a3; } contract B is A { uint8 b1; uint256 b2; uint8 b3; }"
    suggestion = _suggest(text, "B")
    assert suggestion.layout_order[:3] == ("a1", "a2", "a3")
    assert suggestion.suggested_order == ("b1", "b3", "b2")
    assert (suggestion.current_slots, suggestion.achievable_slots) == (5, 4)


def test_first_run_fills_the_inherited_slot():
    text = "contract A { uint256 a; uint128 h; } contract B is A { uint256 x; uint64 y; }"
    suggestion = _suggest(text, "B")
    assert (suggestion.current_slots, suggestion.achievable_slots) == (4, 3)
    assert suggestion.layout_order == ("a", "h", "y", "x")
    unit = parse_solidity(text)
    items = storage_items(unit.contract("B"), unit)
    assert suggestion.achievable_slots == _optimum(items, "B")


def test_suggested_order_is_a_permutation_of_movable_vars():
    for contract, unit in _corpus():
        items = storage_items(contract, unit)
        suggestion = suggest_packing(contract, unit)
        assert sorted(suggestion.suggested_order) == sorted(
            i.name for i in items if i.packable and i.contract == contract.name
        )
        assert sorted(suggestion.layout_order) == sorted(i.name for i in items)
        assert suggestion.achievable_slots <= suggestion.current_slots


def test_layout_order_realizes_achievable_slots():
    for contract, unit in _corpus():
        by_name = {item.name: item for item in storage_items(contract, unit)}
        suggestion = suggest_packing(contract, unit)
        reordered = [by_name[name] for name in suggestion.layout_order]
        assert assign_slots(reordered).total_slots == suggestion.achievable_slots


def test_achievable_slots_match_the_exhaustive_optimum():
    checked = 0
    for contract, unit in _corpus():
        items = storage_items(contract, unit)
        if sum(1 for item in items if item.packable and item.contract == contract.name) > 8:
            continue
        assert suggest_packing(contract, unit).achievable_slots == _optimum(items, contract.name), contract.name
        checked += 1
    assert checked >= 10


def test_power_of_two_sizes_pack_perfectly():
    rng = random.Random(99)
    for _ in range(200):
        items = [StorageItem(f"v{i}", rng.choice([1, 2, 4, 8, 16, 32])) for i in range(rng.randrange(1, 15))]
        bins = first_fit_decreasing(items)
        assert len(bins) == math.ceil(sum(item.size_bytes for item in items) / 32)
        assert all(b.residual_capacity >= 0 for b in bins)
        if len(items) <= 7:
            assert len(bins) == _optimum(items)


def test_equal_sizes_keep_declaration_order():
    items = [StorageItem("a", 8), StorageItem("b", 16), StorageItem("c", 8)]
    bins = first_fit_decreasing(items)
    assert [[e.name for e in b.entries] for b in bins] == [["b", "a", "c"]]


def test_layout_document():
    unit = parse_solidity("contract C { uint128 a; uint256 b; uint128 c; }")
    document = layout_document(unit.contract("C"), unit)
    assert document == {
        "contract": "C",
        "slots": [
            {"name": "a", "slot": 0, "offset": 0, "size": 16},
            {"name": "b", "slot": 1, "offset": 0, "size": 32},
            {"name": "c", "slot": 2, "offset": 0, "size": 16},
        ],
        "total_slots": 3,
        "achievable_slots": 2,
    }
