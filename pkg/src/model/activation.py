"""Activation-stack simulation over the message order of a scenario.

Calls are synchronous: a message sent by a participant implicitly returns every call
made after that participant's latest activation. A ``trans-msg`` opens a new
transaction, so the stack restarts at its receiver. A solid-arrow ether transfer
into a contract runs the receiver's fallback, so the receiver becomes active on
top of the sender; the transfer itself never counts as a re-entry.
"""
from dataclasses import dataclass
from typing import List, Tuple

from src.model.types import MessageKind, Scenario


@dataclass(frozen=True)
class ActivationStep:
    index: int
    stack_before: Tuple[str, ...]
    stack_after: Tuple[str, ...]
    reentered: bool
    inactive_sender: bool


def _is_contract(scenario: Scenario, alias: str) -> bool:
    part = scenario.participant(alias)
    return part is not None and part.kind.is_contract_like


def simulate(scenario: Scenario) -> List[ActivationStep]:
    stack: List[str] = []
    steps = []
    for index, msg in enumerate(scenario.messages):
        before = tuple(stack)
        reentered = False
        inactive = False

        if msg.kind is MessageKind.TRANS_MSG:
            stack = [msg.receiver]
        elif msg.kind is MessageKind.ETHER_TRANSFER:
            if msg.sender in stack:
                del stack[len(stack) - 1 - stack[::-1].index(msg.sender):]
                if not msg.dashed:
                    stack.append(msg.sender)
            elif _is_contract(scenario, msg.sender) and stack:
                inactive = True
            if not msg.dashed and msg.sender in stack and msg.receiver != msg.sender \
                    and _is_contract(scenario, msg.receiver):
                stack.append(msg.receiver)
        else:
            sender_is_contract = _is_contract(scenario, msg.sender)
            if msg.sender in stack:
                del stack[len(stack) - stack[::-1].index(msg.sender):]
            elif not sender_is_contract:
                # external participant calling a view/pure function: its own flow
                stack = []
            elif stack:
                inactive = True
                stack = [msg.sender]
            else:
                stack = [msg.sender]
            if msg.receiver != msg.sender and msg.receiver in stack:
                reentered = True
            stack.append(msg.receiver)

        steps.append(ActivationStep(index, before, tuple(stack), reentered, inactive))
    return steps

