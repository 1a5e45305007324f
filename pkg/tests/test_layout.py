import json
import os
from collections import defaultdict

import pytest

from src.model.errors import UnknownType
from src.solidity.layout import (
    SLOT_BYTES,
    StorageItem,
    assign_slots,
    storage_items,
    storage_layout,
)
from src.solidity.parser import parse_solidity
from tests.conftest import LAYOUT_DIR, load_unit

with open(os.path.join(LAYOUT_DIR, "oracle.json"), encoding="utf-8") as f:
    ORACLE = json.load(f)

ORACLE_CASES = [(name, contract) for name in sorted(ORACLE) for contract in ORACLE[name]]


def _layout(text, name="C"):
    unit = parse_solidity(text)
    return storage_layout(unit.contract(name), unit)


@pytest.mark.parametrize("file_name, contract", ORACLE_CASES)
def test_layout_matches_compiler_output(file_name, contract):
    unit = load_unit(os.path.join(LAYOUT_DIR, file_name))
    layout = storage_layout(unit.contract(contract), unit)
    expected = [(e["label"], int(e["slot"]), e["offset"]) for e in ORACLE[file_name][contract]]
    assert layout.positions() == expected


def test_oracle_covers_enough_contracts():
    assert len(ORACLE_CASES) >= 10


def test_no_state_variables():
    layout = _layout("contract C { function f() public { } }")
    assert layout.entries == ()
    assert layout.total_slots == 0


def test_two_halves_share_a_slot():
    layout = _layout("contract C { uint128 a; uint128 b; uint256 c; }")
    assert layout.positions() == [("a", 0, 0), ("b", 0, 16), ("c", 1, 0)]
    assert layout.total_slots == 2


def test_small_values_around_a_full_slot():
    layout = _layout("contract C { uint8 a; uint256 b; uint8 c; }")
    assert [e.slot for e in layout.entries] == [0, 1, 2]
    assert layout.total_slots == 3


def test_constants_and_immutables_take_no_slot():
    layout = _layout("contract C { uint256 constant A = 1; uint256 immutable B; uint8 c; }")
    assert layout.positions() == [("c", 0, 0)]


def test_mapping_takes_a_dedicated_slot():
    layout = _layout("contract C { uint8 a; mapping(address => uint256) m; uint8 b; }")
    assert layout.positions() == [("a", 0, 0), ("m", 1, 0), ("b", 2, 0)]
    assert layout.entry("m").size_bytes == SLOT_BYTES


def test_struct_occupies_its_slots():
    text = "contract C { struct P { uint128 x; uint128 y; uint8 z; } uint8 a; P p; uint8 b; }"
    layout = _layout(text)
    assert layout.entry("p").slot_count == 2
    assert layout.positions() == [("a", 0, 0), ("p", 1, 0), ("b", 3, 0)]


def test_inherited_variables_come_first():
    text = "contract A { uint8 a; } contract C is A { uint8 c; }"
    layout = _layout(text)
    assert layout.positions() == [("a", 0, 0), ("c", 0, 1)]
    assert [e.contract for e in layout.entries] == ["A", "C"]


def test_unknown_type():
    with pytest.raises(UnknownType):
        _layout("contract C { Missing m; }")


def test_assign_slots_on_items():
    items = [StorageItem("a", 20), StorageItem("big", 32, 3, False), StorageItem("b", 1)]
    layout = assign_slots(items)
    assert layout.positions() == [("a", 0, 0), ("big", 1, 0), ("b", 4, 0)]
    assert layout.total_slots == 5


def _corpus_layouts():
    for file_name in sorted(ORACLE):
        unit = load_unit(os.path.join(LAYOUT_DIR, file_name))
        for contract in unit.contracts:
            yield storage_items(contract, unit), storage_layout(contract, unit)


def test_slots_never_overflow():
    for items, layout in _corpus_layouts():
        used = defaultdict(int)
        for item, entry in zip(items, layout.entries):
            if item.packable:
                used[entry.slot] += entry.size_bytes
                assert entry.offset + entry.size_bytes <= SLOT_BYTES
        assert all(total <= SLOT_BYTES for total in used.values())


def test_offsets_increase_within_a_slot():
    for _, layout in _corpus_layouts():
        by_slot = defaultdict(list)
        for entry in layout.entries:
            by_slot[entry.slot].append(entry.offset)
        for offsets in by_slot.values():
            assert offsets == sorted(set(offsets))
