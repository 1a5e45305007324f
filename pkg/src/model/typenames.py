"""Type names shared by the modeling DSL and the Solidity parser.

Collections are written as type syntax (``T[]``, ``T[N]``, ``mapping(K => V)``) and
the class-diagram collection stereotype is always derived from the type itself.
"""
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

_INT_RE = re.compile(r"^(u?)int(\d*)$")
_BYTES_RE = re.compile(r"^bytes(\d+)$")

# Solidity aliases normalized on construction
_ALIASES = {"uint": "uint256", "int": "int256", "byte": "bytes1"}


def _valid_bits(bits: str) -> bool:
    return bits.isdigit() and 8 <= int(bits) <= 256 and int(bits) % 8 == 0


def is_elementary_name(name: str) -> bool:
    """True for Solidity value/elementary type keywords (after alias normalization)"""
    name = _ALIASES.get(name, name)
    if name in ("address", "bool", "string", "bytes"):
        return True
    match = _INT_RE.match(name)
    if match:
        return _valid_bits(match.group(2))
    match = _BYTES_RE.match(name)
    if match:
        return 1 <= int(match.group(1)) <= 32
    return False


class Collection(str, Enum):
    SCALAR = "scalar"
    ARRAY = "array"
    MAPPING = "mapping"
    MAPPING_ADDRESS = "mapping_address"
    MAPPING_UINT = "mapping_uint"

    @property
    def stereotype(self) -> Optional[str]:
        return {
            Collection.SCALAR: None,
            Collection.ARRAY: "array",
            Collection.MAPPING: "mapping",
            Collection.MAPPING_ADDRESS: "mapping [address]",
            Collection.MAPPING_UINT: "mapping [uint]",
        }[self]


class TypeName:
    """Base of the type-name tree"""

    def innermost(self) -> "TypeName":
        return self

    @property
    def is_value_type(self) -> bool:
        return False


@dataclass(frozen=True)
class ElementaryTypeName(TypeName):
    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", _ALIASES.get(self.name, self.name))

    def __str__(self) -> str:
        return self.name

    @property
    def is_value_type(self) -> bool:
        return self.name not in ("string", "bytes")

    @property
    def is_integer(self) -> bool:
        return bool(_INT_RE.match(self.name))

    @property
    def is_unsigned(self) -> bool:
        return self.name.startswith("uint")

    @property
    def is_dynamic(self) -> bool:
        return self.name in ("string", "bytes")


@dataclass(frozen=True)
class UserDefinedTypeName(TypeName):
    """Struct, enum, contract or interface referenced by name (possibly dotted)"""

    name: str

    def __str__(self) -> str:
        return self.name

    @property
    def short_name(self) -> str:
        return self.name.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class ArrayTypeName(TypeName):
    base: TypeName
    length: Optional[int] = None

    def __str__(self) -> str:
        size = "" if self.length is None else str(self.length)
        return f"{self.base}[{size}]"

    def innermost(self) -> TypeName:
        return self.base.innermost()

    @property
    def is_dynamic(self) -> bool:
        return self.length is None


@dataclass(frozen=True)
class MappingTypeName(TypeName):
    key: TypeName
    value: TypeName

    def __str__(self) -> str:
        return f"mapping({self.key} => {self.value})"

    def innermost(self) -> TypeName:
        return self.value.innermost()


def collection_of(type_name: TypeName) -> Collection:
    """Derive the collection stereotype from the outermost type constructor"""
    if isinstance(type_name, ArrayTypeName):
        return Collection.ARRAY
    if isinstance(type_name, MappingTypeName):
        key = type_name.key
        if isinstance(key, ElementaryTypeName):
            if key.name == "address":
                return Collection.MAPPING_ADDRESS
            if key.is_integer and key.is_unsigned:
                return Collection.MAPPING_UINT
        return Collection.MAPPING
    return Collection.SCALAR


def element_type(type_name: TypeName) -> TypeName:
    """Value type held by a collection (mapping value / array element), else the type itself"""
    if isinstance(type_name, ArrayTypeName):
        return type_name.base
    if isinstance(type_name, MappingTypeName):
        return type_name.value
    return type_name


def make_type(name: str) -> TypeName:
    """Build an elementary or user-defined type name from an identifier"""
    if is_elementary_name(name):
        return ElementaryTypeName(name)
    return UserDefinedTypeName(name)


def is_integer_type(type_name: Optional[TypeName]) -> bool:
    return isinstance(type_name, ElementaryTypeName) and type_name.is_integer
