"""Coding-phase security checklist as static rules over the Solidity subset.

Every rule is a function taking the analysis context and yielding diagnostics.
The two unconditional manual items are appended once per unit.
"""
import logging
from typing import Dict, Iterator, List, Optional

from src.checks import queries as q
from src.checks.catalog import Phase, make
from src.checks.config import LintConfig
from src.checks.diagnostics import Diagnostic
from src.checks.engine import AnalysisContext, Check, run_checks
from src.model.spans import SourceSpan
from src.model.typenames import ArrayTypeName, ElementaryTypeName
from src.model.types import Mutability, Visibility
from src.solidity import ast
from src.solidity.builtins import ADDRESS_MEMBERS, SHADOWABLE

logger = logging.getLogger(__name__)

MAX_FALLBACK_STATEMENTS = 3


def check_txorigin(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, _ in ctx.bodies():
        guarded: List[ast.Node] = []
        for node in ast.walk(callable_.body):
            if isinstance(node, ast.BinaryOp) and node.op in ("==", "!="):
                guarded.append(node)
            elif isinstance(node, ast.Call) and node.head in ("require", "assert"):
                guarded.extend(node.args)
            elif isinstance(node, (ast.If, ast.While)):
                guarded.append(node.condition)
        seen = set()
        for expr in guarded:
            for use in q.find(expr, lambda n: q.is_global(n, "tx.origin")):
                if id(use) in seen:
                    continue
                seen.add(id(use))
                yield make("CL-TXORIGIN", "tx.origin used for authorization; compare msg.sender instead", span=use.span)


def check_lowlevel(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, _ in ctx.bodies():
        for stmt in q.find(callable_.body, lambda n: isinstance(n, ast.ExprStmt)):
            if isinstance(stmt.expr, ast.Call):
                member = q.low_level_member(stmt.expr)
                if member is not None:
                    yield make(
                        "CL-LOWLEVEL",
                        f"return value of .{member}() is not checked",
                        span=stmt.span,
                    )


def check_multisend(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, _ in ctx.bodies():
        if not isinstance(callable_, ast.FuncDef):
            continue
        transfers = q.find(callable_.body, lambda n: isinstance(n, ast.Call) and q.is_ether_transfer(n))
        if len(transfers) >= 2:
            yield make(
                "CL-MULTISEND",
                f"'{callable_.name or 'fallback'}' makes {len(transfers)} ether transfers; "
                "let beneficiaries withdraw instead",
                span=transfers[1].span,
            )


def check_overflow(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for scope, callable_, env in ctx.bodies():
        if scope.contract.kind is ast.ContractDefKind.LIBRARY:
            continue
        for node in ast.walk(callable_.body):
            if isinstance(node, ast.BinaryOp) and node.op in q.ARITHMETIC_OPS:
                left, right, op = node.left, node.right, node.op
            elif isinstance(node, ast.Assignment) and node.op in ("+=", "-=", "*="):
                left, right, op = node.target, node.value, node.op
            else:
                continue
            type_name = env.integer_operands(left, right)
            if type_name is None or scope.has_using_for(type_name):
                continue
            yield make(
                "CL-OVERFLOW",
                f"unchecked '{op}' on {type_name}; use a SafeMath-style library",
                span=node.span,
            )


def check_div(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, env in ctx.bodies():
        for node in ast.walk(callable_.body):
            if isinstance(node, ast.BinaryOp) and node.op == "/":
                left, right = node.left, node.right
            elif isinstance(node, ast.Assignment) and node.op == "/=":
                left, right = node.target, node.value
            else:
                continue
            if env.integer_operands(left, right) is not None:
                yield make("CL-DIV", "integer division rounds down", span=node.span)


def _validates(func: ast.FuncDef, params) -> bool:
    for node in ast.walk(func.body):
        if isinstance(node, ast.Call) and node.head == "require":
            if q.mentions_name(node.args[0] if node.args else None, params):
                return True
        if isinstance(node, ast.If) and q.mentions_name(node.condition, params):
            reverts = q.find(node.then, lambda n: isinstance(n, ast.Call) and n.head == "revert")
            if reverts or q.find(node.then, lambda n: isinstance(n, ast.Opaque) and n.keyword == "revert"):
                return True
    return any(q.mentions_name(arg, params) for mod in func.modifiers for arg in mod.args)


def check_validate(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for scope in ctx.scopes:
        for func in scope.contract.functions:
            if func.body is None or func.is_special or not func.params:
                continue
            if func.visibility not in (Visibility.PUBLIC, Visibility.EXTERNAL):
                continue
            params = {p.name for p in func.params if p.name}
            if params and not _validates(func, params):
                yield make(
                    "CL-VALIDATE",
                    f"'{func.name}' never checks its arguments with require()",
                    span=func.span,
                )


def check_unbounded(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, env in ctx.bodies():
        for loop in q.loops(callable_.body):
            condition = loop.condition
            reason = None
            for node in ast.walk(condition) if condition is not None else ():
                if isinstance(node, ast.MemberAccess) and node.member == "length":
                    base = env.type_of(node.base)
                    if isinstance(base, ArrayTypeName) and base.is_dynamic:
                        reason = "the length of a dynamic array"
                        break
                if isinstance(node, ast.Identifier) and env.is_state(node.name):
                    if env.scope.state_vars[node.name].occupies_storage:
                        reason = f"state variable '{node.name}'"
                        break
            if reason:
                yield make("CL-UNBOUNDED", f"loop bound depends on {reason}", span=loop.span)


def check_fallback(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for scope in ctx.scopes:
        for func in scope.contract.functions:
            if not (func.is_fallback or func.is_receive) or func.body is None:
                continue
            statements = func.body.statements
            if len(statements) > MAX_FALLBACK_STATEMENTS:
                yield make(
                    "CL-FALLBACK",
                    f"{func.name or 'fallback'} function has {len(statements)} statements; keep it simple",
                    span=func.span,
                )
            elif (
                func.is_fallback
                and statements
                and func.mutability is not Mutability.PAYABLE
                and not q.mentions_global(func.body, "msg.data")
            ):
                yield make(
                    "CL-FALLBACK",
                    "non-payable fallback does not check that msg.data is empty",
                    span=func.span,
                )


def check_shadow(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    def flag(kind: str, name: str, span: Optional[SourceSpan]) -> Iterator[Diagnostic]:
        if name in SHADOWABLE:
            yield make("CL-SHADOW", f"{kind} '{name}' shadows a built-in", span=span)

    for scope in ctx.scopes:
        contract = scope.contract
        for var in contract.state_vars:
            yield from flag("state variable", var.name, var.span)
        for event in contract.events:
            yield from flag("event", event.name, event.span)
        for callable_ in list(contract.functions) + list(contract.modifiers):
            kind = "modifier" if isinstance(callable_, ast.ModifierDef) else "function"
            yield from flag(kind, callable_.name, callable_.span)
            for param in callable_.params:
                yield from flag("parameter", param.name, param.span)
            if callable_.body is not None:
                for local in q.find(callable_.body, lambda n: isinstance(n, ast.LocalVar)):
                    yield from flag("local variable", local.name, local.span)


def _is_cast_of(expr: ast.Expr, names, type_names) -> Optional[str]:
    if isinstance(expr, ast.Call) and len(expr.args) == 1 and isinstance(expr.args[0], ast.Identifier):
        head = expr.head
        if head in type_names and expr.args[0].name in names:
            return expr.args[0].name
    return None


def check_rawaddr(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, _ in ctx.bodies():
        if not isinstance(callable_, ast.FuncDef):
            continue
        addresses = {
            p.name for p in callable_.params
            if isinstance(p.type_name, ElementaryTypeName) and p.type_name.name == "address"
        }
        addresses -= q.local_names(callable_.body)
        if not addresses:
            continue
        reported = set()
        for node in ast.walk(callable_.body):
            if not (isinstance(node, ast.Call) and isinstance(node.callee, ast.MemberAccess)):
                continue
            base = node.callee.base
            name = None
            if isinstance(base, ast.Identifier) and base.name in addresses:
                if node.callee.member not in ADDRESS_MEMBERS:
                    name = base.name
            else:
                name = _is_cast_of(base, addresses, ctx.type_names)
            if name is not None and name not in reported:
                reported.add(name)
                yield make(
                    "CL-RAWADDR",
                    f"parameter '{name}' is a raw address used as a contract; declare it with the "
                    "interface type",
                    span=node.span,
                )


def check_assertuse(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, env in ctx.bodies():
        for call in q.find(callable_.body, lambda n: isinstance(n, ast.Call) and n.head == "assert"):
            reads_msg = q.find(
                call,
                lambda n: isinstance(n, ast.MemberAccess)
                and isinstance(n.base, ast.Identifier)
                and n.base.name == "msg",
            )
            if reads_msg or q.mentions_name(call, env.params):
                yield make("CL-ASSERTUSE", "assert() validates input; use require()", span=call.span)


def check_pragma(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    pragma = ctx.unit.pragma
    if pragma is None:
        yield make("CL-PRAGMA", "no solidity pragma; lock the compiler version", span=SourceSpan(ctx.unit.file, 1, 1))
    elif not pragma.locked:
        yield make("CL-PRAGMA", f"compiler version '{pragma.raw}' is not locked", span=pragma.span)


def check_timestamp(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, env in ctx.bodies():
        for node in ast.walk(callable_.body):
            if q.is_global(node, "block.timestamp") or (
                isinstance(node, ast.Identifier) and node.name == "now" and "now" not in env.names
            ):
                yield make("CL-TIMESTAMP", "block timestamp can be influenced by miners", span=node.span)


def check_blocknum(ctx: AnalysisContext) -> Iterator[Diagnostic]:
    for _, callable_, _ in ctx.bodies():
        for node in ast.walk(callable_.body):
            if not (isinstance(node, ast.BinaryOp) and node.op in q.COMPARISON_OPS):
                continue
            numbers = q.find(node, lambda n: isinstance(n, ast.MemberAccess) and n.dotted == "block.number")
            if numbers and q.find(node, q.is_number):
                yield make("CL-BLOCKNUM", "block.number used as a clock", span=numbers[0].span)


CHECKS: Dict[str, Check] = {
    "CL-TXORIGIN": check_txorigin,
    "CL-LOWLEVEL": check_lowlevel,
    "CL-MULTISEND": check_multisend,
    "CL-OVERFLOW": check_overflow,
    "CL-DIV": check_div,
    "CL-VALIDATE": check_validate,
    "CL-UNBOUNDED": check_unbounded,
    "CL-FALLBACK": check_fallback,
    "CL-SHADOW": check_shadow,
    "CL-RAWADDR": check_rawaddr,
    "CL-ASSERTUSE": check_assertuse,
    "CL-PRAGMA": check_pragma,
    "CL-TIMESTAMP": check_timestamp,
    "CL-BLOCKNUM": check_blocknum,
}


def lint(unit: ast.SourceUnit, config: Optional[LintConfig] = None) -> List[Diagnostic]:
    """Apply the coding-phase checklist to ``unit``.

    Returns diagnostics sorted by (file, line, column, rule id); the manual items
    CL-FIXWARN and CL-COVERAGE come last.
    """
    diagnostics = run_checks(unit, CHECKS, Phase.CODING, config or LintConfig())
    logger.info(f"{unit.file}: {len(diagnostics)} coding finding(s)")
    return diagnostics
