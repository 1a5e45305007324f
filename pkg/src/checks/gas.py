"""GAS-saving pattern rules, storage packing included."""
import logging
from typing import Dict, Iterator, List, Optional

from src.checks import queries as q
from src.checks.catalog import Phase, make
from src.checks.config import LintConfig
from src.checks.diagnostics import Diagnostic
from src.checks.engine import AnalysisContext, Check, run_checks
from src.checks.packing import suggest_packing
from src.model.errors import AbcdeError
from src.model.typenames import ArrayTypeName, ElementaryTypeName, is_elementary_name
from src.model.types import Visibility
from src.solidity import ast
from src.utils.text_cleaner import byte_length

logger = logging.getLogger(__name__)

WORD_BYTES = 32
MIN_MODIFIER_USES = 2
MIN_MODIFIER_STATEMENTS = 2


def is_default_value(expr: Optional[ast.Expr]) -> bool:
    """``0``, ``false``, ``""`` or a zero conversion such as ``address(0)``"""
    if isinstance(expr, ast.Literal):
        return expr.is_zero and expr.kind is not ast.LiteralKind.HEX
    if isinstance(expr, ast.Call) and expr.head is not None and len(expr.args) == 1:
        inner = expr.args[0]
        head = expr.head
        if head in ("address", "payable") or (is_elementary_name(head) and ElementaryTypeName(head).is_value_type):
            return isinstance(inner, ast.Literal) and inner.kind is ast.LiteralKind.NUMBER and inner.is_zero
    return False


def check_pack(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for contract in ctx.unit.contracts:
        if contract.kind is not ast.ContractDefKind.CONTRACT:
            continue
        try:
            suggestion = suggest_packing(contract, ctx.unit)
        except AbcdeError as e:
            logger.warning(f"{ctx.unit.file}: storage layout of {contract.name} skipped: {e}")
            continue
        if suggestion.improves:
            yield make(
                "GA-PACK",
                f"{contract.name} uses {suggestion.current_slots} storage slot(s); declaring "
                f"{', '.join(suggestion.suggested_order)} in that order needs "
                f"{suggestion.achievable_slots}",
                span=contract.span,
            )


def check_init(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for contract in ctx.unit.contracts:
        for var in contract.state_vars:
            if var.occupies_storage and is_default_value(var.initializer):
                yield make("GA-INIT", f"'{var.name}' is explicitly initialized to its default value", span=var.span)
    for _, callable_, _ in ctx.bodies():
        for decl in q.find(callable_.body, lambda n: isinstance(n, ast.LocalVarDecl)):
            if len(decl.declarations) == 1 and decl.declarations[0] is not None and is_default_value(decl.value):
                name = decl.declarations[0].name
                yield make("GA-INIT", f"'{name}' is explicitly initialized to its default value", span=decl.span)


def check_array(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for contract in ctx.unit.contracts:
        for var in contract.state_vars:
            if isinstance(var.type_name, ArrayTypeName) and var.type_name.is_dynamic and var.occupies_storage:
                yield make(
                    "GA-ARRAY",
                    f"dynamic array '{var.name}'; an integer-keyed mapping is cheaper",
                    span=var.span,
                )


def check_zeroassign(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, env in ctx.bodies():
        for node in ast.walk(callable_.body):
            if isinstance(node, ast.Assignment) and node.op == "=" and is_default_value(node.value):
                root = q.storage_root(node.target, env)
                if root is not None:
                    yield make("GA-ZEROASSIGN", f"reset '{root}' with delete", span=node.span)


def _storage_writes(body: ast.Node, env: q.TypeEnv) -> Iterator[ast.Node]:
    for node in ast.walk(body):
        target = None
        if isinstance(node, ast.Assignment):
            target = node.target
        elif isinstance(node, ast.UnaryOp) and node.op in ("++", "--", "delete"):
            target = node.operand
        elif isinstance(node, ast.Delete):
            target = node.target
        if target is not None and q.storage_root(target, env) is not None:
            yield node


def check_loopstore(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, env in ctx.bodies():
        seen = set()
        for loop in q.loops(callable_.body):
            for write in _storage_writes(loop.body, env):
                if id(write) in seen:
                    continue
                seen.add(id(write))
                yield make(
                    "GA-LOOPSTORE",
                    "storage written inside a loop; accumulate in memory and write once",
                    span=write.span,
                )


def check_oporder(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, _ in ctx.bodies():
        for node in ast.walk(callable_.body):
            if isinstance(node, ast.BinaryOp) and node.op in ("&&", "||"):
                if q.contains_call(node.left) and not q.contains_call(node.right):
                    yield make(
                        "GA-OPORDER",
                        f"the call on the left of '{node.op}' always runs; test the cheap operand first",
                        span=node.span,
                    )


def check_pubext(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    referenced = q.referenced_functions(ctx.unit)
    for contract in ctx.unit.contracts:
        if contract.kind is not ast.ContractDefKind.CONTRACT:
            continue
        for func in contract.functions:
            if func.visibility is not Visibility.PUBLIC or func.is_special or func.body is None:
                continue
            if func.name not in referenced:
                yield make(
                    "GA-PUBEXT",
                    f"public function '{func.name}' is never called internally; declare it external",
                    span=func.span,
                )


def check_modinline(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for scope in ctx.scopes:
        for mod in scope.contract.modifiers:
            if mod.body is None:
                continue
            statements = [s for s in mod.body.statements if not q.is_placeholder(s)]
            users = [
                func.name
                for other in ctx.scopes
                if scope.contract in other.lineage
                for func in other.contract.functions
                if mod.name in func.applied_modifiers
            ]
            if len(users) >= MIN_MODIFIER_USES and len(statements) >= MIN_MODIFIER_STATEMENTS:
                yield make(
                    "GA-MODINLINE",
                    f"modifier '{mod.name}' ({len(statements)} statements) is inlined into "
                    f"{len(users)} functions; move its body into an internal function",
                    span=mod.span,
                )


def check_longstr(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, _ in ctx.bodies():
        for call in q.find(callable_.body, lambda n: isinstance(n, ast.Call) and n.head in ("require", "revert")):
            position = 1 if call.head == "require" else 0
            if len(call.args) <= position:
                continue
            reason = call.args[position]
            if isinstance(reason, ast.Literal) and reason.kind is ast.LiteralKind.STRING:
                size = byte_length(reason.value)
                if size > WORD_BYTES:
                    yield make(
                        "GA-LONGSTR",
                        f"revert reason is {size} bytes; keep it within {WORD_BYTES}",
                        span=reason.span,
                    )


def check_bytes32(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for scope in ctx.scopes:
        for var in scope.contract.state_vars:
            if not (isinstance(var.type_name, ElementaryTypeName) and var.type_name.is_dynamic):
                continue
            values = [var.initializer] if var.initializer is not None else []
            for base in ctx.scopes:
                if scope.contract not in base.lineage:
                    continue
                for callable_ in q.callables(base.contract):
                    env = q.TypeEnv(base, callable_)
                    for node in ast.walk(callable_.body):
                        if (
                            isinstance(node, ast.Assignment)
                            and isinstance(node.target, ast.Identifier)
                            and node.target.name == var.name
                            and env.is_state(var.name)
                        ):
                            values.append(node.value)
            short_literals = all(
                isinstance(v, ast.Literal)
                and v.kind is ast.LiteralKind.STRING
                and byte_length(v.value) <= WORD_BYTES
                for v in values
            )
            if values and short_literals:
                yield make(
                    "GA-BYTES32",
                    f"'{var.name}' only ever holds short literals; bytes32 is cheaper than {var.type_name}",
                    span=var.span,
                )


CHECKS: Dict[str, Check] = {
    "GA-PACK": check_pack,
    "GA-INIT": check_init,
    "GA-ARRAY": check_array,
    "GA-ZEROASSIGN": check_zeroassign,
    "GA-LOOPSTORE": check_loopstore,
    "GA-OPORDER": check_oporder,
    "GA-PUBEXT": check_pubext,
    "GA-MODINLINE": check_modinline,
    "GA-LONGSTR": check_longstr,
    "GA-BYTES32": check_bytes32,
}


def analyze_gas(unit: ast.SourceUnit, config: Optional[LintConfig] = None) -> List[Diagnostic]:
    """Apply the GAS pattern rules to ``unit``; the three manual items come last"""
    diagnostics = run_checks(unit, CHECKS, Phase.GAS, config or LintConfig())
    logger.info(f"{unit.file}: {len(diagnostics)} GAS finding(s)")
    return diagnostics
