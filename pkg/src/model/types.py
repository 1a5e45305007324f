"""Domain types of an ABCDE design model.

The model houses the stereotype vocabulary of the extended UML class and sequence
diagrams and nothing more. Every type is immutable; source spans are carried for
reporting but never take part in equality, so a re-parsed model compares equal to
the one it was formatted from.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterator, Optional, Tuple, Union

from src.model.spans import SourceSpan
from src.model.typenames import Collection, TypeName, collection_of, element_type


class ActorKind(str, Enum):
    PERSON = "person"
    SYSTEM = "system"
    DEVICE = "device"
    CONTRACT = "contract"
    EXTERNAL_CONTRACT = "external_contract"
    ORACLE = "oracle"
    ACCOUNT = "account"

    @property
    def stereotype(self) -> str:
        return self.value.replace("_", " ")

    @property
    def is_contract_like(self) -> bool:
        # oracles route like contracts
        return self in (ActorKind.CONTRACT, ActorKind.EXTERNAL_CONTRACT, ActorKind.ORACLE)


class ContractKind(str, Enum):
    CONTRACT = "contract"
    INTERFACE = "interface"
    LIBRARY_CONTRACT = "library_contract"
    STRUCT = "struct"
    ENUM_DECL = "enum_decl"

    @property
    def stereotype(self) -> str:
        return {
            ContractKind.CONTRACT: "contract",
            ContractKind.INTERFACE: "interface",
            ContractKind.LIBRARY_CONTRACT: "library contract",
            ContractKind.STRUCT: "struct",
            ContractKind.ENUM_DECL: "enum",
        }[self]


class Visibility(str, Enum):
    PUBLIC = "public"
    EXTERNAL = "external"
    INTERNAL = "internal"
    PRIVATE = "private"

    @property
    def glyph(self) -> str:
        return {"public": "+", "external": "+", "internal": "#", "private": "-"}[self.value]


class Mutability(str, Enum):
    NONPAYABLE = "nonpayable"
    PAYABLE = "payable"
    VIEW = "view"
    PURE = "pure"


class MessageKind(str, Enum):
    """Sequence-diagram message stereotypes; values are the DSL tag spellings"""

    TRANS_MSG = "trans-msg"
    DIRECT_MSG = "direct-msg"
    VIEW_CALL = "view"
    PURE_CALL = "pure"
    FALLBACK_CALL = "fallback"
    ETHER_TRANSFER = "ethers"
    CREATION = "create"

    @property
    def is_call(self) -> bool:
        return self is not MessageKind.ETHER_TRANSFER


class PatternId(str, Enum):
    CEI = "CEI"
    ES = "ES"
    SB = "SB"
    RL = "RL"
    MU = "MU"
    BL = "BL"
    GC = "GC"
    WF = "WF"
    AU = "AU"
    OR = "OR"
    RN = "RN"
    TC = "TC"
    TE = "TE"
    MH = "MH"
    PD = "PD"

    @property
    def title(self) -> str:
        return PATTERN_TITLES[self]


PATTERN_TITLES = {
    PatternId.CEI: "Check-effect-interaction",
    PatternId.ES: "Emergency stop",
    PatternId.SB: "Speed bump",
    PatternId.RL: "Rate limit",
    PatternId.MU: "Mutex",
    PatternId.BL: "Balance limit",
    PatternId.GC: "Guard check",
    PatternId.WF: "Withdrawal from contracts (pull over push)",
    PatternId.AU: "Authorization",
    PatternId.OR: "Oracle",
    PatternId.RN: "Randomness",
    PatternId.TC: "Time constraint",
    PatternId.TE: "Termination",
    PatternId.MH: "Math",
    PatternId.PD: "Proxy delegate",
}


def _span_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Param:
    name: str
    type_name: TypeName

    def __str__(self) -> str:
        return f"{self.name}: {self.type_name}"


@dataclass(frozen=True)
class ActorDecl:
    name: str
    kind: ActorKind
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class StateVar:
    name: str
    type_name: TypeName
    visibility: Visibility = Visibility.INTERNAL
    span: Optional[SourceSpan] = _span_field()

    @property
    def collection(self) -> Collection:
        return collection_of(self.type_name)

    @property
    def value_type(self) -> TypeName:
        return element_type(self.type_name)


@dataclass(frozen=True)
class EventDecl:
    name: str
    params: Tuple[Param, ...] = ()
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class ModifierDecl:
    name: str
    params: Tuple[Param, ...] = ()
    guard: Optional[str] = None
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class FunctionSig:
    name: str
    params: Tuple[Param, ...] = ()
    returns: Tuple[TypeName, ...] = ()
    visibility: Visibility = Visibility.PUBLIC
    mutability: Mutability = Mutability.NONPAYABLE
    applied_modifiers: Tuple[str, ...] = ()
    has_body: bool = True
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class ContractDecl:
    name: str
    stereotype: ContractKind = ContractKind.CONTRACT
    parents: Tuple[str, ...] = ()
    state_vars: Tuple[StateVar, ...] = ()
    events: Tuple[EventDecl, ...] = ()
    modifiers: Tuple[ModifierDecl, ...] = ()
    functions: Tuple[FunctionSig, ...] = ()
    pattern_tags: FrozenSet[PatternId] = frozenset()
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class StructDecl:
    name: str
    fields: Tuple[Param, ...] = ()
    span: Optional[SourceSpan] = _span_field()

    stereotype = ContractKind.STRUCT


@dataclass(frozen=True)
class EnumDecl:
    name: str
    members: Tuple[str, ...] = ()
    span: Optional[SourceSpan] = _span_field()

    stereotype = ContractKind.ENUM_DECL


Declaration = Union[ContractDecl, StructDecl, EnumDecl]


@dataclass(frozen=True)
class Participant:
    """Scenario participant: an alias with its kind, optionally bound to a declared contract"""

    alias: str
    kind: ActorKind
    contract: Optional[str] = None
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class Message:
    sender: str
    receiver: str
    label: str
    kind: MessageKind
    dashed: bool = False
    span: Optional[SourceSpan] = _span_field()


@dataclass(frozen=True)
class Scenario:
    name: str
    participants: Tuple[Participant, ...] = ()
    messages: Tuple[Message, ...] = ()
    span: Optional[SourceSpan] = _span_field()

    def participant(self, alias: str) -> Optional[Participant]:
        for part in self.participants:
            if part.alias == alias:
                return part
        return None


@dataclass(frozen=True)
class SystemModel:
    """The ABCDE design model.

    Contracts, interfaces, libraries, structs and enums are kept in one ordered
    ``declarations`` tuple so their source order survives; ``contracts``, ``structs``
    and ``enums`` are filtered views.
    """

    name: str
    goal: Optional[str] = None
    actors: Tuple[ActorDecl, ...] = ()
    declarations: Tuple[Declaration, ...] = ()
    scenarios: Tuple[Scenario, ...] = ()
    span: Optional[SourceSpan] = _span_field()

    @property
    def contracts(self) -> Tuple[ContractDecl, ...]:
        return tuple(d for d in self.declarations if isinstance(d, ContractDecl))

    @property
    def structs(self) -> Tuple[StructDecl, ...]:
        return tuple(d for d in self.declarations if isinstance(d, StructDecl))

    @property
    def enums(self) -> Tuple[EnumDecl, ...]:
        return tuple(d for d in self.declarations if isinstance(d, EnumDecl))

    def contract(self, name: str) -> Optional[ContractDecl]:
        for decl in self.contracts:
            if decl.name == name:
                return decl
        return None

    def declaration(self, name: str) -> Optional[Declaration]:
        for decl in self.declarations:
            if decl.name == name:
                return decl
        return None

    def actor(self, name: str) -> Optional[ActorDecl]:
        for actor in self.actors:
            if actor.name == name:
                return actor
        return None

    def scenario(self, name: str) -> Optional[Scenario]:
        for scenario in self.scenarios:
            if scenario.name == name:
                return scenario
        return None

    def iter_state_vars(self) -> Iterator[Tuple[ContractDecl, StateVar]]:
        for contract in self.contracts:
            for var in contract.state_vars:
                yield contract, var
