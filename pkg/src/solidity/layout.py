"""Storage layout following the Ethereum storage convention.

State variables fill 32-byte slots in declaration order, inherited variables
first (base-most contract first). A value type joins the current slot when the
bytes left in it suffice. Mappings, dynamic arrays, ``bytes`` and ``string`` take
one full slot each; structs and fixed-size arrays start a fresh slot and the
variable after them starts a fresh slot too. Constants and immutables take no slot.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple

from src.model.errors import AbcdeError, UnknownType
from src.model.typenames import (
    ArrayTypeName,
    ElementaryTypeName,
    MappingTypeName,
    TypeName,
    UserDefinedTypeName,
)
from src.solidity.ast import ContractDef, EnumDef, SourceUnit, StructDef, VarDecl

logger = logging.getLogger(__name__)

SLOT_BYTES = 32
ADDRESS_BYTES = 20


@dataclass(frozen=True)
class StorageItem:
    """A variable as the slot allocator sees it"""

    name: str
    size_bytes: int
    slot_count: int = 1
    packable: bool = True
    contract: str = ""


@dataclass(frozen=True)
class LayoutEntry:
    name: str
    slot: int
    offset: int
    size_bytes: int
    slot_count: int = 1
    contract: str = ""


@dataclass(frozen=True)
class StorageLayout:
    entries: Tuple[LayoutEntry, ...]
    total_slots: int

    def entry(self, name: str) -> Optional[LayoutEntry]:
        for entry in self.entries:
            if entry.name == name:
                return entry
        return None

    def positions(self) -> List[Tuple[str, int, int]]:
        return [(e.name, e.slot, e.offset) for e in self.entries]


def assign_slots(items: Sequence[StorageItem]) -> StorageLayout:
    """Allocate ``items`` in order into 32-byte slots"""
    entries = []
    slot = 0
    offset = 0
    for item in items:
        if item.packable:
            if offset + item.size_bytes > SLOT_BYTES:
                slot += 1
                offset = 0
            entries.append(LayoutEntry(item.name, slot, offset, item.size_bytes, 1, item.contract))
            offset += item.size_bytes
        else:
            if offset > 0:
                slot += 1
                offset = 0
            entries.append(
                LayoutEntry(item.name, slot, 0, min(item.size_bytes, SLOT_BYTES), item.slot_count, item.contract)
            )
            slot += item.slot_count
    total = slot + (1 if offset > 0 else 0)
    return StorageLayout(tuple(entries), total)


class TypeSizer:
    """Resolves type names of one source unit to storage sizes"""

    def __init__(self, unit: SourceUnit):
        self.unit = unit
        self._resolving: Set[str] = set()

    def _lookup(self, name: str, scope: ContractDef):
        if "." in name:
            owner, short = name.rsplit(".", 1)
            container = self.unit.contract(owner.rsplit(".", 1)[-1])
            candidates = [container] if container is not None else []
        else:
            short = name
            try:
                candidates = self.unit.linearize(scope.name)
            except AbcdeError:
                candidates = [scope]
            candidates = candidates + [c for c in self.unit.contracts if c not in candidates]
        for contract in candidates:
            for struct in contract.structs:
                if struct.name == short:
                    return struct
            for enum in contract.enums:
                if enum.name == short:
                    return enum
        for struct in self.unit.structs:
            if struct.name == short:
                return struct
        for enum in self.unit.enums:
            if enum.name == short:
                return enum
        if self.unit.contract(short) is not None:
            return self.unit.contract(short)
        return None

    def item(self, name: str, type_name: TypeName, scope: ContractDef) -> StorageItem:
        owner = scope.name
        if isinstance(type_name, MappingTypeName):
            return StorageItem(name, SLOT_BYTES, 1, False, owner)
        if isinstance(type_name, ElementaryTypeName):
            if type_name.is_dynamic:
                return StorageItem(name, SLOT_BYTES, 1, False, owner)
            return StorageItem(name, self.elementary_size(type_name), 1, True, owner)
        if isinstance(type_name, ArrayTypeName):
            if type_name.length is None:
                return StorageItem(name, SLOT_BYTES, 1, False, owner)
            return StorageItem(name, SLOT_BYTES, self.fixed_array_slots(type_name, scope), False, owner)
        if isinstance(type_name, UserDefinedTypeName):
            target = self._lookup(type_name.name, scope)
            if isinstance(target, EnumDef):
                return StorageItem(name, self.enum_size(target), 1, True, owner)
            if isinstance(target, StructDef):
                return StorageItem(name, SLOT_BYTES, self.struct_slots(target, scope), False, owner)
            if isinstance(target, ContractDef):
                return StorageItem(name, ADDRESS_BYTES, 1, True, owner)
        raise UnknownType(str(type_name), scope.name)

    @staticmethod
    def elementary_size(type_name: ElementaryTypeName) -> int:
        text = type_name.name
        if text == "address":
            return ADDRESS_BYTES
        if text == "bool":
            return 1
        if type_name.is_integer:
            return int(text.lstrip("uint")) // 8
        if text.startswith("bytes"):
            return int(text[len("bytes"):])
        raise UnknownType(text)

    @staticmethod
    def enum_size(enum: EnumDef) -> int:
        count = max(len(enum.members), 1)
        return max(1, math.ceil((count - 1).bit_length() / 8))

    def struct_slots(self, struct: StructDef, scope: ContractDef) -> int:
        if struct.name in self._resolving:
            raise UnknownType(f"recursive struct {struct.name}", scope.name)
        self._resolving.add(struct.name)
        try:
            items = [self.item(f.name, f.type_name, scope) for f in struct.fields]
        finally:
            self._resolving.discard(struct.name)
        return max(1, assign_slots(items).total_slots)

    def fixed_array_slots(self, array: ArrayTypeName, scope: ContractDef) -> int:
        element = self.item("", array.base, scope)
        if element.packable:
            per_slot = SLOT_BYTES // element.size_bytes
            return max(1, math.ceil(array.length / per_slot))
        return max(1, array.length * element.slot_count)


def state_variables(contract: ContractDef, unit: SourceUnit) -> List[Tuple[ContractDef, VarDecl]]:
    """Storage variables of ``contract`` and its bases, base-most contract first"""
    result = []
    for owner in reversed(unit.linearize(contract.name)):
        for var in owner.state_vars:
            if var.occupies_storage:
                result.append((owner, var))
    return result


def storage_items(contract: ContractDef, unit: SourceUnit) -> List[StorageItem]:
    sizer = TypeSizer(unit)
    return [sizer.item(var.name, var.type_name, owner) for owner, var in state_variables(contract, unit)]


def storage_layout(contract: ContractDef, unit: SourceUnit) -> StorageLayout:
    """Compute the slot/offset of every state variable of ``contract``.

    Raises:
        UnknownType: a state variable type cannot be resolved in ``unit``
        UnknownContract: a base contract is not defined in ``unit``
    """
    layout = assign_slots(storage_items(contract, unit))
    logger.debug(f"layout of {contract.name}: {layout.total_slots} slot(s)")
    return layout
