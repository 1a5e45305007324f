"""Canonical pretty-printer for ABCDE models.

The output always re-parses to a structurally equal model: sections that would be
empty are omitted, internal state visibility and nonpayable mutability are left
implicit, function visibility is always written and pattern tags follow the
catalog order.
"""
from typing import List

from src.dsl.lexer import quote
from src.model.types import (
    ContractDecl,
    ContractKind,
    EnumDecl,
    FunctionSig,
    ModifierDecl,
    Mutability,
    PatternId,
    Scenario,
    StateVar,
    StructDecl,
    SystemModel,
    Visibility,
)

INDENT = "    "
KEYWORDS = {
    ContractKind.CONTRACT: "contract",
    ContractKind.INTERFACE: "interface",
    ContractKind.LIBRARY_CONTRACT: "library",
}


def _params(params) -> str:
    return ", ".join(f"{p.name}: {p.type_name}" for p in params)


def _state_var(var: StateVar) -> str:
    text = f"{var.name}: {var.type_name}"
    if var.visibility is not Visibility.INTERNAL:
        text += f" {var.visibility.value}"
    return text


def _modifier(mod: ModifierDecl) -> str:
    text = mod.name
    if mod.params:
        text += f"({_params(mod.params)})"
    if mod.guard is not None:
        text += f" {quote(mod.guard)}"
    return text


def _function(func: FunctionSig) -> str:
    parts = [f"{func.name}({_params(func.params)})", func.visibility.value]
    if func.mutability is not Mutability.NONPAYABLE:
        parts.append(func.mutability.value)
    if func.applied_modifiers:
        parts.append(f"uses ({', '.join(func.applied_modifiers)})")
    if func.returns:
        parts.append(f"returns ({', '.join(str(t) for t in func.returns)})")
    return " ".join(parts)


def _section(name: str, lines: List[str], depth: int) -> List[str]:
    pad = INDENT * depth
    return [f"{pad}{name} {{"] + [f"{pad}{INDENT}{line}" for line in lines] + [f"{pad}}}"]


def _contract(decl: ContractDecl) -> List[str]:
    header = f"{KEYWORDS.get(decl.stereotype, 'contract')} {decl.name}"
    if decl.parents:
        header += f" is {', '.join(decl.parents)}"
    if decl.pattern_tags:
        tags = [p.value for p in PatternId if p in decl.pattern_tags]
        header += f" @pattern({', '.join(tags)})"
    lines = [f"{INDENT}{header} {{"]

    only_functions = not (decl.state_vars or decl.events or decl.modifiers)
    if decl.stereotype is not ContractKind.CONTRACT and only_functions:
        lines += [f"{INDENT * 2}{_function(f)}" for f in decl.functions]
    else:
        sections = (
            ("state", [_state_var(v) for v in decl.state_vars]),
            ("events", [f"{e.name}({_params(e.params)})" for e in decl.events]),
            ("modifiers", [_modifier(m) for m in decl.modifiers]),
            ("functions", [_function(f) for f in decl.functions]),
        )
        for name, body in sections:
            if body:
                lines += _section(name, body, 2)
    lines.append(f"{INDENT}}}")
    return lines


def _struct(decl: StructDecl) -> List[str]:
    fields = [f"{INDENT * 2}{f.name}: {f.type_name}" for f in decl.fields]
    return [f"{INDENT}struct {decl.name} {{"] + fields + [f"{INDENT}}}"]


def _enum(decl: EnumDecl) -> List[str]:
    return [f"{INDENT}enum {decl.name} {{ {', '.join(decl.members)} }}"]


def _scenario(scenario: Scenario) -> List[str]:
    lines = [f"{INDENT}scenario {scenario.name} {{"]
    for part in scenario.participants:
        target = f"contract {part.contract}" if part.contract else part.kind.value
        lines.append(f"{INDENT * 2}participant {part.alias} : {target}")
    for msg in scenario.messages:
        arrow = "-->" if msg.dashed else "->"
        lines.append(
            f"{INDENT * 2}{msg.sender} {arrow} {msg.receiver} : {quote(msg.label)} [{msg.kind.value}]"
        )
    lines.append(f"{INDENT}}}")
    return lines


def format_model(model: SystemModel) -> str:
    """Render ``model`` as canonical DSL text (LF line endings, 4-space indent)"""
    blocks: List[List[str]] = []
    if model.goal is not None:
        blocks.append([f"{INDENT}goal {quote(model.goal)}"])
    if model.actors:
        blocks.append([f"{INDENT}actor {a.name} : {a.kind.value}" for a in model.actors])
    for decl in model.declarations:
        if isinstance(decl, StructDecl):
            blocks.append(_struct(decl))
        elif isinstance(decl, EnumDecl):
            blocks.append(_enum(decl))
        else:
            blocks.append(_contract(decl))
    blocks.extend(_scenario(s) for s in model.scenarios)

    lines = [f"system {model.name} {{"]
    for i, block in enumerate(blocks):
        if i:
            lines.append("")
        lines.extend(block)
    lines.append("}")
    return "\n".join(lines) + "\n"
