"""Design-phase security checklist over a validated SystemModel."""
import logging
from typing import List, Set, Tuple

from src.checks.catalog import Classification, Phase, make, rules_for
from src.checks.diagnostics import Diagnostic, model_order
from src.model.activation import simulate
from src.model.errors import AbcdeError
from src.model.inheritance import effective_interface
from src.model.types import (
    ActorKind,
    ContractKind,
    MessageKind,
    PatternId,
    Scenario,
    SystemModel,
)

logger = logging.getLogger(__name__)

MODEL, CONTRACTS, SCENARIOS, CONDITIONAL, MANUAL = range(5)
FAILSAFE_TAGS = frozenset([PatternId.ES, PatternId.PD])
LIMIT_TAGS = frozenset([PatternId.BL, PatternId.RL])


def _message_path(scenario: Scenario, index: int) -> str:
    return f"scenario {scenario.name} / message {index + 1}"


def _tagged(model: SystemModel, tags) -> bool:
    return any(contract.pattern_tags & tags for contract in model.contracts)


def _kind(scenario: Scenario, alias: str):
    part = scenario.participant(alias)
    return part.kind if part is not None else None


def check_reentrancy(model: SystemModel) -> List[Diagnostic]:
    found = []
    for s_index, scenario in enumerate(model.scenarios):
        for step in simulate(scenario):
            if not step.reentered:
                continue
            msg = scenario.messages[step.index]
            found.append(make(
                "DC-REENTRANCY",
                f"'{msg.receiver}' is called back by '{msg.sender}' while its own call is still active",
                span=msg.span,
                path=_message_path(scenario, step.index),
                order=(SCENARIOS, s_index, step.index),
            ))
    return found


def check_failsafe(model: SystemModel) -> List[Diagnostic]:
    if not model.contracts or _tagged(model, FAILSAFE_TAGS):
        return []
    return [make(
        "DC-FAILSAFE",
        "no contract is tagged @pattern(ES) or @pattern(PD); add a way to stop or upgrade the system",
        path=f"system {model.name}",
        order=(MODEL,),
    )]


def check_balance(model: SystemModel) -> List[Diagnostic]:
    if _tagged(model, LIMIT_TAGS):
        return []
    found = []
    for s_index, scenario in enumerate(model.scenarios):
        for index, msg in enumerate(scenario.messages):
            if msg.kind is MessageKind.ETHER_TRANSFER and _kind(scenario, msg.receiver) is ActorKind.CONTRACT:
                found.append(make(
                    "DC-BALANCE",
                    f"ether flows into '{msg.receiver}' but no contract is tagged @pattern(BL) or @pattern(RL)",
                    span=msg.span,
                    path=_message_path(scenario, index),
                    order=(SCENARIOS, s_index, index),
                ))
                break
    return found


def check_pushpay(model: SystemModel) -> List[Diagnostic]:
    found = []
    for s_index, scenario in enumerate(model.scenarios):
        for index, msg in enumerate(scenario.messages):
            if msg.kind is not MessageKind.ETHER_TRANSFER:
                continue
            if _kind(scenario, msg.sender) is not ActorKind.CONTRACT:
                continue
            if _kind(scenario, msg.receiver) not in (ActorKind.PERSON, ActorKind.ACCOUNT):
                continue
            if index > 0:
                previous = scenario.messages[index - 1]
                if (
                    previous.kind is MessageKind.TRANS_MSG
                    and previous.sender == msg.receiver
                    and previous.receiver == msg.sender
                ):
                    continue
            found.append(make(
                "DC-PUSHPAY",
                f"'{msg.sender}' pushes ether to '{msg.receiver}'; let the beneficiary withdraw it",
                span=msg.span,
                path=_message_path(scenario, index),
                order=(SCENARIOS, s_index, index),
            ))
    return found


def check_multiple_inheritance(model: SystemModel) -> List[Diagnostic]:
    found = []
    reported: Set[Tuple[str, frozenset]] = set()
    for c_index, contract in enumerate(model.contracts):
        try:
            interface = effective_interface(model, contract.name)
        except AbcdeError as e:
            logger.warning(f"inheritance of {contract.name} not analyzed: {e}")
            continue
        for collision in interface.collisions:
            key = (collision.function, collision.pair)
            if collision.related or key in reported:
                continue
            reported.add(key)
            first, second = sorted(collision.pair)
            found.append(make(
                "DC-MI",
                f"'{collision.function}' is defined by unrelated contracts {first} and {second}; "
                f"{contract.name} resolves it by C3 linearization",
                span=contract.span,
                path=f"contract {contract.name}",
                order=(CONTRACTS, c_index),
            ))
    return found


def check_dependencies(model: SystemModel) -> List[Diagnostic]:
    external = [a.name for a in model.actors if a.kind is ActorKind.EXTERNAL_CONTRACT]
    for scenario in model.scenarios:
        external += [
            p.alias for p in scenario.participants
            if p.kind is ActorKind.EXTERNAL_CONTRACT and p.alias not in external
        ]
    libraries = [c.name for c in model.contracts if c.stereotype is ContractKind.LIBRARY_CONTRACT]
    if not (external or libraries):
        return []
    used = ", ".join(external + libraries)
    return [make(
        "DC-DEPS",
        f"use audited and trustworthy dependencies ({used})",
        path=f"system {model.name}",
        order=(CONDITIONAL,),
    )]


def check_design(model: SystemModel) -> List[Diagnostic]:
    """Apply the design checklist; manual review items are always appended.

    Expects a model for which ``validate_model`` reports nothing.
    """
    found = (
        check_failsafe(model)
        + check_multiple_inheritance(model)
        + check_reentrancy(model)
        + check_balance(model)
        + check_pushpay(model)
        + check_dependencies(model)
    )
    manual = [
        rule for rule in rules_for(Phase.DESIGN)
        if rule.classification is Classification.UNCONDITIONAL_MANUAL
    ]
    for index, rule in enumerate(manual):
        found.append(rule.diagnostic(rule.title, order=(MANUAL, index)))
    result = sorted(found, key=model_order)
    logger.info(f"design check of {model.name}: {len(result)} item(s)")
    return result
