"""Stereotyped class and sequence diagrams in a line-oriented text format.

The grammar is published in ``docs/diagram-format.md``. Stereotypes are written
with ASCII guillemets (``<<contract>>``) and only the vocabulary of the model is
ever emitted, so golden files can be compared byte for byte.
"""
import logging
import os
from dataclasses import dataclass
from typing import List, Tuple

from src.model.typenames import UserDefinedTypeName
from src.model.types import (
    ContractDecl,
    EnumDecl,
    MessageKind,
    Message,
    Scenario,
    StructDecl,
    SystemModel,
)

logger = logging.getLogger(__name__)

INDENT = "    "
SEPARATOR = "--"


@dataclass(frozen=True)
class DiagramText:
    lines: Tuple[str, ...]

    @property
    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)

    def write(self, path: str) -> None:
        """Write the diagram as UTF-8 with LF line endings.

        Raises:
            RuntimeError: If the file cannot be written
        """
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(self.text)
        except OSError as e:
            logger.error(f"Failed to write diagram to {path}: {str(e)}")
            raise RuntimeError(f"Could not write diagram: {str(e)}")
        logger.info(f"Diagram written to {path}")


def _params(params) -> str:
    return ", ".join(f"{p.name}: {p.type_name}" for p in params)


def _block(header: str, middle: List[str], bottom: List[str]) -> List[str]:
    lines = [f"{header} {{"]
    lines += [INDENT + line for line in middle]
    if bottom:
        lines.append(INDENT + SEPARATOR)
        lines += [INDENT + line for line in bottom]
    lines.append("}")
    return lines


def _contract_block(decl: ContractDecl) -> List[str]:
    middle = []
    for var in decl.state_vars:
        line = f"{var.name}: {var.type_name}"
        stereotype = var.collection.stereotype
        if stereotype is not None:
            line += f" <<{stereotype}>>"
        middle.append(line)
    middle += [f"event {e.name}({_params(e.params)}) <<event>>" for e in decl.events]

    bottom = [f"modifier {m.name}({_params(m.params)}) <<modifier>>" for m in decl.modifiers]
    for func in decl.functions:
        line = f"{func.visibility.glyph} {func.name}({_params(func.params)})"
        if func.returns:
            line += f": {', '.join(str(t) for t in func.returns)}"
        bottom.append(line)
    return _block(f"class {decl.name} <<{decl.stereotype.stereotype}>>", middle, bottom)


def _struct_block(decl: StructDecl) -> List[str]:
    fields = [f"{f.name}: {f.type_name}" for f in decl.fields]
    return _block(f"class {decl.name} <<struct>>", fields, [])


def _enum_block(decl: EnumDecl) -> List[str]:
    return _block(f"class {decl.name} <<enum>>", list(decl.members), [])


def _edges(model: SystemModel) -> List[str]:
    declared = {decl.name for decl in model.declarations}
    edges = []
    for contract in model.contracts:
        edges += [f"{contract.name} --|> {parent}" for parent in contract.parents]
        for var in contract.state_vars:
            target = var.type_name.innermost()
            if not isinstance(target, UserDefinedTypeName) or target.short_name not in declared:
                continue
            edge = f"{contract.name} --> {target.short_name} : {var.name}"
            stereotype = var.collection.stereotype
            if stereotype is not None:
                edge += f" <<{stereotype}>>"
            edges.append(edge)
    return edges


def class_diagram(model: SystemModel) -> DiagramText:
    """Render every declaration of ``model`` as a class block, then the edges.

    Blocks follow declaration order and are separated by one blank line; the
    generalization and association edges come last.
    """
    blocks = []
    for decl in model.declarations:
        if isinstance(decl, StructDecl):
            blocks.append(_struct_block(decl))
        elif isinstance(decl, EnumDecl):
            blocks.append(_enum_block(decl))
        else:
            blocks.append(_contract_block(decl))
    edges = _edges(model)
    if edges:
        blocks.append(edges)

    lines: List[str] = []
    for i, block in enumerate(blocks):
        if i:
            lines.append("")
        lines.extend(block)
    logger.debug(f"class diagram of {model.name}: {len(lines)} line(s)")
    return DiagramText(tuple(lines))


def _message_line(msg: Message) -> str:
    if msg.kind is MessageKind.CREATION:
        label = " ".join(filter(None, ["create", msg.label]))
        return f"{msg.sender} -> {msg.receiver} ** : {label}"
    arrow = "-->" if msg.kind is MessageKind.ETHER_TRANSFER else "->"
    label = " ".join(filter(None, [msg.label, f"<<{msg.kind.value}>>"]))
    return f"{msg.sender} {arrow} {msg.receiver} : {label}"


def sequence_diagram(scenario: Scenario) -> DiagramText:
    """Participants in declaration order followed by one line per message"""
    lines = [f"participant {p.alias} <<{p.kind.stereotype}>>" for p in scenario.participants]
    lines += [_message_line(msg) for msg in scenario.messages]
    return DiagramText(tuple(lines))
