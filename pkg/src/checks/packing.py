"""Storage packing suggestions (first-fit-decreasing over 32-byte slots)."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.solidity.ast import ContractDef, SourceUnit
from src.solidity.layout import SLOT_BYTES, StorageItem, assign_slots, storage_items, storage_layout

logger = logging.getLogger(__name__)


class Bin:
    """One storage slot being filled"""

    def __init__(self, size: int = SLOT_BYTES):
        self.size = size
        self.residual_capacity = size
        self.entries: List[StorageItem] = []

    def append(self, item: StorageItem) -> None:
        self.entries.append(item)
        self.residual_capacity -= item.size_bytes

    def __repr__(self) -> str:
        return f"Bin(residual_capacity: {self.residual_capacity}  entries: {[e.name for e in self.entries]})"


def first_fit_decreasing(
    items: List[StorageItem], bin_size: int = SLOT_BYTES, first_capacity: Optional[int] = None
) -> List[Bin]:
    """Pack value-type items into slots; equal sizes keep their declaration order.

    ``first_capacity`` is the room left in an already started slot; it becomes the
    first bin and is dropped again when nothing fits into it.
    """
    bins: List[Bin] = []
    if first_capacity is not None and 0 < first_capacity < bin_size:
        started = Bin(bin_size)
        started.residual_capacity = first_capacity
        bins.append(started)
    ranked = sorted(enumerate(items), key=lambda pair: (-pair[1].size_bytes, pair[0]))
    for _, item in ranked:
        if item.size_bytes > bin_size:
            raise ValueError(f"Item {item.name!r} is too large to fit in a {bin_size} byte slot.")
        for slot in bins:
            if slot.residual_capacity >= item.size_bytes:
                slot.append(item)
                break
        else:
            new_bin = Bin(bin_size)
            new_bin.append(item)
            bins.append(new_bin)
    return [slot for slot in bins if slot.entries]


@dataclass(frozen=True)
class PackingSuggestion:
    contract: str
    current_slots: int
    achievable_slots: int
    suggested_order: Tuple[str, ...]
    layout_order: Tuple[str, ...] = ()  # every storage variable, in the order to declare them

    @property
    def improves(self) -> bool:
        return self.achievable_slots < self.current_slots


def _runs(items: List[StorageItem], contract: str) -> List[Tuple[bool, List[StorageItem]]]:
    """Split ``items`` into alternating runs of movable and pinned variables"""
    runs: List[Tuple[bool, List[StorageItem]]] = []
    for item in items:
        movable = item.packable and item.contract == contract
        if runs and runs[-1][0] == movable:
            runs[-1][1].append(item)
        else:
            runs.append((movable, [item]))
    return runs


def _trailing_residual(prefix: List[StorageItem]) -> int:
    layout = assign_slots(prefix)
    if not layout.entries:
        return SLOT_BYTES
    last = layout.entries[-1]
    if prefix[-1].packable:
        return SLOT_BYTES - (last.offset + last.size_bytes)
    return SLOT_BYTES


def suggest_packing(contract: ContractDef, unit: SourceUnit) -> PackingSuggestion:
    """Reorder the packable state variables of ``contract`` to use fewer slots.

    Mappings, dynamic types, structs, fixed arrays and inherited variables stay at
    their declaration index. Each run of packable variables between them is packed
    on its own, starting from the room left in the slot before it. Laying out
    ``layout_order`` yields exactly ``achievable_slots``.

    Raises:
        UnknownType: propagated from the storage layout
    """
    items = storage_items(contract, unit)
    current = assign_slots(items).total_slots
    movable = [item for item in items if item.packable and item.contract == contract.name]

    reordered: List[StorageItem] = []
    for is_movable, run in _runs(items, contract.name):
        if not is_movable:
            reordered.extend(run)
            continue
        bins = first_fit_decreasing(run, first_capacity=_trailing_residual(reordered))
        packed = [entry for slot in bins for entry in slot.entries]
        # keep the declared order when packing does not gain a slot here
        if assign_slots(reordered + packed).total_slots < assign_slots(reordered + run).total_slots:
            reordered.extend(packed)
        else:
            reordered.extend(run)
    achievable = assign_slots(reordered).total_slots

    if achievable >= current:
        return PackingSuggestion(
            contract.name,
            current,
            current,
            tuple(item.name for item in movable),
            tuple(item.name for item in items),
        )
    logger.debug(f"{contract.name}: {current} slot(s) can be packed into {achievable}")
    return PackingSuggestion(
        contract.name,
        current,
        achievable,
        tuple(item.name for item in reordered if item.packable and item.contract == contract.name),
        tuple(item.name for item in reordered),
    )


def layout_document(contract: ContractDef, unit: SourceUnit) -> dict:
    """Layout report of one contract as a JSON-ready dict"""
    layout = storage_layout(contract, unit)
    suggestion = suggest_packing(contract, unit)
    return {
        "contract": contract.name,
        "slots": [
            {"name": entry.name, "slot": entry.slot, "offset": entry.offset, "size": entry.size_bytes}
            for entry in layout.entries
        ],
        "total_slots": layout.total_slots,
        "achievable_slots": suggestion.achievable_slots,
    }
