"""AST queries shared by the coding-phase and GAS rules."""
import logging
from typing import Dict, Iterator, List, Optional, Set, Tuple, Union

from src.model.errors import AbcdeError
from src.model.typenames import (
    ArrayTypeName,
    ElementaryTypeName,
    MappingTypeName,
    TypeName,
    UserDefinedTypeName,
    is_elementary_name,
    make_type,
)
from src.solidity import ast
from src.solidity.builtins import CALL_OPTIONS, LOW_LEVEL_CALLS

logger = logging.getLogger(__name__)

UINT256 = ElementaryTypeName("uint256")
ARITHMETIC_OPS = frozenset(["+", "-", "*", "**"])
COMPARISON_OPS = frozenset(["<", "<=", ">", ">=", "==", "!="])
_GLOBAL_TYPES = {
    "msg.value": UINT256,
    "block.timestamp": UINT256,
    "block.number": UINT256,
    "msg.sender": ElementaryTypeName("address"),
    "tx.origin": ElementaryTypeName("address"),
}

Callable = Union[ast.FuncDef, ast.ModifierDef]


class ContractScope:
    """A contract together with everything it inherits inside its source unit"""

    def __init__(self, unit: ast.SourceUnit, contract: ast.ContractDef):
        self.unit = unit
        self.contract = contract
        try:
            self.lineage = unit.linearize(contract.name)
        except AbcdeError as e:
            logger.info(f"{unit.file}: {contract.name}: {e}; inherited members ignored")
            self.lineage = [contract]
        self.state_vars: Dict[str, ast.VarDecl] = {}
        for base in reversed(self.lineage):
            for var in base.state_vars:
                self.state_vars[var.name] = var

    @property
    def using_declarations(self) -> List[ast.UsingFor]:
        return [using for base in self.lineage for using in base.using_declarations]

    def has_using_for(self, type_name: TypeName) -> bool:
        for using in self.using_declarations:
            if using.target is None or str(using.target) == str(type_name):
                return True
        return False

    def function(self, name: str) -> Optional[ast.FuncDef]:
        for base in self.lineage:
            func = base.function(name)
            if func is not None:
                return func
        return None

    def struct(self, name: str) -> Optional[ast.StructDef]:
        short = name.rsplit(".", 1)[-1]
        for base in self.lineage + list(self.unit.contracts):
            for struct in base.structs:
                if struct.name == short:
                    return struct
        for struct in self.unit.structs:
            if struct.name == short:
                return struct
        return None


def callables(contract: ast.ContractDef) -> Iterator[Callable]:
    """Functions and modifiers of ``contract`` that have a body"""
    for func in contract.functions:
        if func.body is not None:
            yield func
    for mod in contract.modifiers:
        if mod.body is not None:
            yield mod


def local_names(body: Optional[ast.Node]) -> Set[str]:
    if body is None:
        return set()
    return {node.name for node in ast.walk(body) if isinstance(node, ast.LocalVar)}


class TypeEnv:
    """Names visible inside one function body mapped to their declared types"""

    def __init__(self, scope: ContractScope, callable_: Optional[Callable] = None):
        self.scope = scope
        self.names: Dict[str, Optional[TypeName]] = {
            name: var.type_name for name, var in scope.state_vars.items()
        }
        self.params: Set[str] = set()
        if callable_ is not None:
            for param in callable_.params:
                self.names[param.name] = param.type_name
                self.params.add(param.name)
            for ret in getattr(callable_, "returns", ()):
                if ret.name:
                    self.names[ret.name] = ret.type_name
            if callable_.body is not None:
                for node in ast.walk(callable_.body):
                    if isinstance(node, ast.LocalVar):
                        self.names[node.name] = node.type_name
        self.locals = local_names(callable_.body if callable_ is not None else None) | self.params

    def is_state(self, name: str) -> bool:
        return name in self.scope.state_vars and name not in self.locals

    def type_of(self, expr: Optional[ast.Expr]) -> Optional[TypeName]:
        if expr is None:
            return None
        if isinstance(expr, ast.Identifier):
            if expr.name == "now" and "now" not in self.names:
                return UINT256
            return self.names.get(expr.name)
        if isinstance(expr, ast.Literal):
            return UINT256 if expr.kind is ast.LiteralKind.NUMBER else None
        if isinstance(expr, ast.MemberAccess):
            if expr.dotted in _GLOBAL_TYPES and expr.base.name not in self.names:
                return _GLOBAL_TYPES[expr.dotted]
            if expr.member == "length":
                return UINT256
            base = self.type_of(expr.base)
            if isinstance(base, UserDefinedTypeName):
                struct = self.scope.struct(base.name)
                if struct is not None:
                    for member in struct.fields:
                        if member.name == expr.member:
                            return member.type_name
            return None
        if isinstance(expr, ast.IndexAccess):
            base = self.type_of(expr.base)
            if isinstance(base, MappingTypeName):
                return base.value
            if isinstance(base, ArrayTypeName):
                return base.base
            return None
        if isinstance(expr, ast.Call):
            head = expr.head
            if head is not None and is_elementary_name(head):
                return make_type(head)
            if head is not None:
                func = self.scope.function(head)
                if func is not None and len(func.returns) == 1:
                    return func.returns[0].type_name
            return None
        if isinstance(expr, ast.BinaryOp):
            if expr.op in COMPARISON_OPS or expr.op in ("&&", "||"):
                return ElementaryTypeName("bool")
            return self.type_of(expr.left) or self.type_of(expr.right)
        if isinstance(expr, ast.UnaryOp):
            return self.type_of(expr.operand)
        if isinstance(expr, ast.Assignment):
            return self.type_of(expr.target)
        return None

    def is_integer(self, expr: ast.Expr) -> bool:
        type_name = self.type_of(expr)
        return isinstance(type_name, ElementaryTypeName) and type_name.is_integer

    def integer_operands(self, left: ast.Expr, right: ast.Expr) -> Optional[TypeName]:
        """Integer type of a binary operation, or None if not both sides are integers.

        Two literals fold at compile time and never count.
        """
        if is_number(left) and is_number(right):
            return None
        if not (self.is_integer(left) and self.is_integer(right)):
            return None
        return self.type_of(right) if is_number(left) else self.type_of(left)


def is_number(expr: Optional[ast.Expr]) -> bool:
    return isinstance(expr, ast.Literal) and expr.kind is ast.LiteralKind.NUMBER


def is_global(expr: ast.Node, dotted: str) -> bool:
    """``tx.origin``-style global member access"""
    return isinstance(expr, ast.MemberAccess) and expr.dotted == dotted


def find(node: Optional[ast.Node], predicate) -> List[ast.Node]:
    if node is None:
        return []
    return [n for n in ast.walk(node) if predicate(n)]


def mentions_name(node: Optional[ast.Node], names) -> bool:
    return bool(find(node, lambda n: isinstance(n, ast.Identifier) and n.name in names))


def mentions_global(node: Optional[ast.Node], dotted: str) -> bool:
    return bool(find(node, lambda n: is_global(n, dotted)))


def contains_call(node: Optional[ast.Node]) -> bool:
    """True when evaluating ``node`` runs a function call (type conversions excluded)"""
    for n in ast.walk(node) if node is not None else ():
        if isinstance(n, ast.Call):
            head = n.head
            if head is None or not (is_elementary_name(head) or head in ("address", "payable")):
                return True
    return False


def unwrap_call_options(callee: ast.Expr) -> ast.Expr:
    """Strip ``.value(x)`` / ``.gas(x)`` / ``{value: x}`` wrappers from a callee"""
    while True:
        if isinstance(callee, ast.Call) and not callee.args and callee.options:
            callee = callee.callee
        elif (
            isinstance(callee, ast.Call)
            and isinstance(callee.callee, ast.MemberAccess)
            and callee.callee.member in CALL_OPTIONS
        ):
            callee = callee.callee.base
        else:
            return callee


def low_level_member(call: ast.Call) -> Optional[str]:
    callee = unwrap_call_options(call.callee)
    if isinstance(callee, ast.MemberAccess) and callee.member in LOW_LEVEL_CALLS:
        return callee.member
    return None


def carries_value(call: ast.Call) -> bool:
    """Low-level call that forwards ether"""
    if any(name == "value" for name, _ in call.options):
        return True
    callee = call.callee
    while isinstance(callee, ast.Call):
        if any(name == "value" for name, _ in callee.options):
            return True
        inner = callee.callee
        if isinstance(inner, ast.MemberAccess) and inner.member == "value":
            return True
        callee = inner.base if isinstance(inner, ast.MemberAccess) else inner
    return False


def is_ether_transfer(call: ast.Call) -> bool:
    callee = call.callee
    if isinstance(callee, ast.MemberAccess) and callee.member in ("transfer", "send"):
        return len(call.args) == 1 and not call.arg_names
    return low_level_member(call) == "call" and carries_value(call)


def loops(node: Optional[ast.Node]) -> List[Union[ast.For, ast.While]]:
    return find(node, lambda n: isinstance(n, (ast.For, ast.While)))


def storage_root(expr: ast.Expr, env: TypeEnv) -> Optional[str]:
    """State variable written when assigning to ``expr`` (``a``, ``a[i]``, ``a.f``)"""
    while isinstance(expr, (ast.IndexAccess, ast.MemberAccess)):
        expr = expr.base
    if isinstance(expr, ast.Identifier) and env.is_state(expr.name):
        var = env.scope.state_vars[expr.name]
        if var.occupies_storage:
            return expr.name
    return None


def referenced_functions(unit: ast.SourceUnit) -> Set[str]:
    """Names used as internal call targets anywhere in ``unit``.

    Plain identifiers, ``super.f`` and ``Base.f`` all count; ``this.f`` is an
    external call and does not.
    """
    contracts = {c.name for c in unit.contracts}
    names: Set[str] = set()
    for contract in unit.contracts:
        for callable_ in callables(contract):
            for node in ast.walk(callable_.body):
                if isinstance(node, ast.Identifier):
                    names.add(node.name)
                elif isinstance(node, ast.MemberAccess) and isinstance(node.base, ast.Identifier):
                    if node.base.name == "super" or node.base.name in contracts:
                        names.add(node.member)
        for func in contract.functions:
            for mod in func.modifiers:
                for arg in mod.args:
                    names.update(n.name for n in ast.walk(arg) if isinstance(n, ast.Identifier))
        for var in contract.state_vars:
            if var.initializer is not None:
                names.update(n.name for n in ast.walk(var.initializer) if isinstance(n, ast.Identifier))
    return names


def top_level_statements(body: Optional[ast.Block]) -> Tuple[ast.Stmt, ...]:
    return body.statements if body is not None else ()


def is_placeholder(stmt: ast.Stmt) -> bool:
    return isinstance(stmt, ast.ExprStmt) and isinstance(stmt.expr, ast.Identifier) and stmt.expr.name == "_"
