"""Semantic validation of design models.

Violations are returned as diagnostics, one per broken invariant, ordered by the
position of the offending declaration in the model and then by rule id.
"""
import logging
from typing import Dict, List, Optional, Set, Tuple

from src.checks.catalog import make
from src.checks.diagnostics import Diagnostic, model_order
from src.model.activation import simulate
from src.model.errors import AbcdeError
from src.model.inheritance import linearize
from src.model.types import (
    ActorKind,
    ContractDecl,
    ContractKind,
    EnumDecl,
    MessageKind,
    Scenario,
    StructDecl,
    SystemModel,
)
from src.model.typenames import (
    ArrayTypeName,
    MappingTypeName,
    TypeName,
    UserDefinedTypeName,
)
from src.solidity.builtins import RESERVED

logger = logging.getLogger(__name__)

ACTOR, DECL, SCENARIO = 0, 1, 2


class _Collector:
    def __init__(self):
        self.items: List[Diagnostic] = []

    def add(self, rule_id: str, message: str, order: Tuple[int, ...], path: str, span=None):
        self.items.append(make(rule_id, message, span=span, path=path, order=order))


def _user_types(type_name: TypeName):
    if isinstance(type_name, UserDefinedTypeName):
        yield type_name
    elif isinstance(type_name, ArrayTypeName):
        yield from _user_types(type_name.base)
    elif isinstance(type_name, MappingTypeName):
        yield from _user_types(type_name.key)
        yield from _user_types(type_name.value)


def _mapping_keys(type_name: TypeName):
    if isinstance(type_name, MappingTypeName):
        yield type_name.key
        yield from _mapping_keys(type_name.value)
    elif isinstance(type_name, ArrayTypeName):
        yield from _mapping_keys(type_name.base)


def _check_names(model: SystemModel, out: _Collector) -> None:
    seen: Dict[str, str] = {}
    entries = (
        [(ACTOR, i, a.name, a.span, f"actor {a.name}") for i, a in enumerate(model.actors)]
        + [(DECL, i, d.name, d.span, f"{d.stereotype.stereotype} {d.name}")
           for i, d in enumerate(model.declarations)]
        + [(SCENARIO, i, s.name, s.span, f"scenario {s.name}")
           for i, s in enumerate(model.scenarios)]
    )
    for group, index, name, span, path in entries:
        if name in seen:
            out.add("MOD-DUP-NAME", f"'{name}' is already declared as {seen[name]}",
                    (group, index), path, span)
        else:
            seen[name] = path
        if name in RESERVED:
            out.add("MOD-RESERVED-NAME", f"'{name}' is a Solidity built-in name",
                    (group, index), path, span)


def _check_types(model: SystemModel, owner: str, type_name: TypeName, order, path, span,
                 out: _Collector) -> None:
    for user in _user_types(type_name):
        if model.declaration(user.short_name) is None:
            out.add("MOD-UNKNOWN-TYPE", f"{owner}: type '{user}' is not declared", order, path, span)
    for key in _mapping_keys(type_name):
        if isinstance(key, (ArrayTypeName, MappingTypeName)):
            out.add("MOD-MAPPING-KEY", f"{owner}: mapping key '{key}' is not elementary",
                    order, path, span)
        elif isinstance(key, UserDefinedTypeName) and isinstance(
            model.declaration(key.short_name), StructDecl
        ):
            out.add("MOD-MAPPING-KEY", f"{owner}: struct '{key}' cannot be a mapping key",
                    order, path, span)


def _check_contract(model: SystemModel, index: int, contract: ContractDecl, out: _Collector) -> None:
    order = (DECL, index)
    path = f"{contract.stereotype.stereotype} {contract.name}"
    span = contract.span

    if contract.stereotype in (ContractKind.STRUCT, ContractKind.ENUM_DECL):
        out.add("MOD-STEREOTYPE", f"'{contract.name}' uses stereotype "
                f"{contract.stereotype.stereotype} on a contract declaration", order, path, span)

    seen_parents: Set[str] = set()
    for parent in contract.parents:
        if parent in seen_parents:
            out.add("MOD-DUP-PARENT", f"'{contract.name}' lists parent '{parent}' twice",
                    order, path, span)
        seen_parents.add(parent)
        target = model.contract(parent)
        if target is None or target.stereotype not in (ContractKind.CONTRACT, ContractKind.INTERFACE):
            out.add("MOD-UNKNOWN-PARENT",
                    f"'{contract.name}' inherits from '{parent}', which is not a declared "
                    f"contract or interface", order, path, span)

    ancestors: Optional[List[str]] = None
    if all(model.contract(p) is not None for p in contract.parents):
        try:
            ancestors = linearize(model, contract.name)[1:]
        except AbcdeError as exc:
            out.add("MOD-INHERITANCE", str(exc), order, path, span)
    if ancestors is None:
        ancestors = [p for p in contract.parents if model.contract(p) is not None]

    if contract.stereotype is ContractKind.INTERFACE:
        for var in contract.state_vars:
            out.add("MOD-IFACE-STATE", f"interface '{contract.name}' declares state variable "
                    f"'{var.name}'", order, path, var.span or span)
        for func in contract.functions:
            if func.has_body:
                out.add("MOD-IFACE-BODY", f"interface '{contract.name}' implements "
                        f"function '{func.name}'", order, path, func.span or span)

    inherited_events: Set[str] = set()
    inherited_modifiers: Set[str] = set()
    for name in ancestors:
        parent = model.contract(name)
        if parent is not None:
            inherited_events.update(e.name for e in parent.events)
            inherited_modifiers.update(m.name for m in parent.modifiers)

    own_names: Set[str] = set()
    members = (
        [("state variable", v.name, v.span) for v in contract.state_vars]
        + [("event", e.name, e.span) for e in contract.events]
        + [("modifier", m.name, m.span) for m in contract.modifiers]
    )
    for kind, name, member_span in members:
        if name in own_names:
            out.add("MOD-DUP-MEMBER", f"{kind} '{name}' is declared twice in '{contract.name}'",
                    order, path, member_span or span)
        own_names.add(name)
        if (kind == "event" and name in inherited_events) or (
            kind == "modifier" and name in inherited_modifiers
        ):
            out.add("MOD-DUP-MEMBER", f"{kind} '{name}' of '{contract.name}' is already "
                    f"declared by an ancestor", order, path, member_span or span)

    all_names = [v.name for v in contract.state_vars] + [e.name for e in contract.events] \
        + [m.name for m in contract.modifiers] + [f.name for f in contract.functions]
    for name in all_names:
        if name in RESERVED:
            out.add("MOD-RESERVED-NAME", f"'{name}' in '{contract.name}' is a Solidity "
                    f"built-in name", order, path, span)

    known_modifiers = {m.name for m in contract.modifiers} | inherited_modifiers
    for func in contract.functions:
        for applied in func.applied_modifiers:
            if applied not in known_modifiers:
                out.add("MOD-UNKNOWN-MODIFIER", f"function '{func.name}' applies undeclared "
                        f"modifier '{applied}'", order, path, func.span or span)

    for var in contract.state_vars:
        _check_types(model, f"{contract.name}.{var.name}", var.type_name, order, path,
                     var.span or span, out)
    for func in contract.functions:
        for param in func.params:
            _check_types(model, f"{contract.name}.{func.name}", param.type_name, order, path,
                         func.span or span, out)
        for ret in func.returns:
            _check_types(model, f"{contract.name}.{func.name}", ret, order, path,
                         func.span or span, out)
    for event in contract.events:
        for param in event.params:
            _check_types(model, f"{contract.name}.{event.name}", param.type_name, order, path,
                         event.span or span, out)


def _check_struct(model: SystemModel, index: int, struct: StructDecl, out: _Collector) -> None:
    order = (DECL, index)
    path = f"struct {struct.name}"
    names: Set[str] = set()
    for field in struct.fields:
        if field.name in names:
            out.add("MOD-STRUCT-FIELD", f"struct '{struct.name}' declares field "
                    f"'{field.name}' twice", order, path, struct.span)
        names.add(field.name)
        _check_types(model, f"{struct.name}.{field.name}", field.type_name, order, path,
                     struct.span, out)


def _check_enum(index: int, enum: EnumDecl, out: _Collector) -> None:
    order = (DECL, index)
    path = f"enum {enum.name}"
    if not enum.members:
        out.add("MOD-ENUM-MEMBER", f"enum '{enum.name}' has no members", order, path, enum.span)
    if len(set(enum.members)) != len(enum.members):
        out.add("MOD-ENUM-MEMBER", f"enum '{enum.name}' repeats a member", order, path, enum.span)


def _check_scenario(model: SystemModel, index: int, scenario: Scenario, out: _Collector) -> None:
    base = f"scenario {scenario.name}"
    aliases: Set[str] = set()
    for pos, part in enumerate(scenario.participants):
        order = (SCENARIO, index, 0, pos)
        path = f"{base} / participant {part.alias}"
        if part.alias in aliases:
            out.add("MOD-PART-ALIAS", f"participant '{part.alias}' is declared twice",
                    order, path, part.span)
        aliases.add(part.alias)
        if part.contract is not None and model.contract(part.contract) is None:
            out.add("MOD-PART-CONTRACT", f"participant '{part.alias}' binds undeclared "
                    f"contract '{part.contract}'", order, path, part.span)
        actor = model.actor(part.alias)
        if actor is not None and actor.kind is not part.kind:
            out.add("MOD-ACTOR-KIND", f"participant '{part.alias}' is a {part.kind.value} but "
                    f"actor '{actor.name}' is a {actor.kind.value}", order, path, part.span)

    endpoints_ok = []
    for pos, msg in enumerate(scenario.messages):
        order = (SCENARIO, index, 1, pos)
        path = f"{base} / message {pos + 1}"
        span = msg.span
        sender = scenario.participant(msg.sender)
        receiver = scenario.participant(msg.receiver)
        missing = [a for a, p in ((msg.sender, sender), (msg.receiver, receiver)) if p is None]
        for alias in missing:
            out.add("MOD-MSG-ENDPOINT", f"'{alias}' is not a participant of '{scenario.name}'",
                    order, path, span)
        endpoints_ok.append(not missing)
        if missing:
            continue

        kind = msg.kind
        if msg.dashed and kind is not MessageKind.ETHER_TRANSFER:
            out.add("MOD-DASHED-KIND", f"dashed arrow carries a [{kind.value}] message",
                    order, path, span)
        if kind is MessageKind.TRANS_MSG:
            if sender.kind.is_contract_like:
                out.add("MOD-TRANSMSG-SOURCE", f"transaction sent by contract participant "
                        f"'{sender.alias}'", order, path, span)
            if not receiver.kind.is_contract_like:
                out.add("MOD-TRANSMSG-TARGET", f"transaction sent to non-contract participant "
                        f"'{receiver.alias}'", order, path, span)
        elif kind is MessageKind.DIRECT_MSG:
            if not (sender.kind.is_contract_like and receiver.kind.is_contract_like):
                out.add("MOD-DIRECTMSG", f"direct message '{msg.sender}' -> '{msg.receiver}' "
                        f"is not contract to contract", order, path, span)
        elif kind is MessageKind.FALLBACK_CALL:
            if msg.sender != msg.receiver or not sender.kind.is_contract_like:
                out.add("MOD-FALLBACK-SELF", "fallback call not sent by a contract to itself",
                        order, path, span)
        elif kind in (MessageKind.VIEW_CALL, MessageKind.PURE_CALL, MessageKind.CREATION):
            if not receiver.kind.is_contract_like:
                out.add("MOD-CALL-TARGET", f"[{kind.value}] message sent to non-contract "
                        f"participant '{receiver.alias}'", order, path, span)
        if kind is not MessageKind.ETHER_TRANSFER and ActorKind.ACCOUNT in (sender.kind, receiver.kind):
            out.add("MOD-ACCOUNT-ETHERS", f"account participant exchanges a [{kind.value}] "
                    f"message", order, path, span)

    if all(endpoints_ok):
        for step in simulate(scenario):
            if step.inactive_sender:
                msg = scenario.messages[step.index]
                out.add("MOD-ACTIVATION", f"'{msg.sender}' sends a message while not activated",
                        (SCENARIO, index, 1, step.index), f"{base} / message {step.index + 1}",
                        msg.span)


def validate_model(model: SystemModel) -> List[Diagnostic]:
    """Check every type invariant of ``model``; an empty list means well-formed"""
    out = _Collector()
    _check_names(model, out)
    for index, decl in enumerate(model.declarations):
        if isinstance(decl, ContractDecl):
            _check_contract(model, index, decl, out)
        elif isinstance(decl, StructDecl):
            _check_struct(model, index, decl, out)
        elif isinstance(decl, EnumDecl):
            _check_enum(index, decl, out)
    for index, scenario in enumerate(model.scenarios):
        _check_scenario(model, index, scenario, out)

    result = sorted(out.items, key=model_order)
    logger.debug(f"validated model '{model.name}': {len(result)} diagnostics")
    return result
