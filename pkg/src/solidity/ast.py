"""AST of the supported Solidity subset.

Every node carries the SourceSpan of its first token. Spans never take part in
equality. Constructs outside the subset survive as ``Opaque`` statements or
``OpaqueExpr`` expressions, which keep their sub-expressions visible to the rules.
"""
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from src.model.inheritance import c3_linearize
from src.model.spans import SourceSpan
from src.model.typenames import TypeName
from src.model.types import Mutability, Visibility


def _span():
    return field(default=None, compare=False, repr=False)


class Node:
    span: Optional[SourceSpan]

    def children(self) -> Iterator["Node"]:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Node):
                yield value
            elif isinstance(value, tuple):
                for item in value:
                    if isinstance(item, Node):
                        yield item
                    elif isinstance(item, tuple):
                        yield from (sub for sub in item if isinstance(sub, Node))


class Expr(Node):
    pass


class Stmt(Node):
    pass


# expressions ---------------------------------------------------------------


@dataclass(frozen=True)
class Identifier(Expr):
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class MemberAccess(Expr):
    base: Expr
    member: str
    span: Optional[SourceSpan] = _span()

    @property
    def dotted(self) -> Optional[str]:
        """``tx.origin``-style name when the base is a plain identifier"""
        if isinstance(self.base, Identifier):
            return f"{self.base.name}.{self.member}"
        return None


@dataclass(frozen=True)
class IndexAccess(Expr):
    base: Expr
    index: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Call(Expr):
    callee: Expr
    args: Tuple[Expr, ...] = ()
    arg_names: Tuple[str, ...] = ()
    options: Tuple[Tuple[str, Expr], ...] = ()
    span: Optional[SourceSpan] = _span()

    @property
    def head(self) -> Optional[str]:
        return self.callee.name if isinstance(self.callee, Identifier) else None


@dataclass(frozen=True)
class BinaryOp(Expr):
    op: str
    left: Expr
    right: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class UnaryOp(Expr):
    op: str
    operand: Expr
    prefix: bool = True
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Assignment(Expr):
    op: str
    target: Expr
    value: Expr
    span: Optional[SourceSpan] = _span()


class LiteralKind(str, Enum):
    NUMBER = "number"
    STRING = "string"
    BOOL = "bool"
    HEX = "hex"


@dataclass(frozen=True)
class Literal(Expr):
    kind: LiteralKind
    value: str
    unit: Optional[str] = None
    span: Optional[SourceSpan] = _span()

    @property
    def is_zero(self) -> bool:
        if self.kind is LiteralKind.NUMBER:
            text = self.value.replace("_", "").lower()
            try:
                return (int(text, 16) if text.startswith("0x") else float(text)) == 0
            except ValueError:
                return False
        if self.kind is LiteralKind.BOOL:
            return self.value == "false"
        if self.kind is LiteralKind.STRING:
            return self.value == ""
        return False


@dataclass(frozen=True)
class TupleExpr(Expr):
    elements: Tuple[Optional[Expr], ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class OpaqueExpr(Expr):
    """Conditional, ``new``, inline array or other expression outside the subset"""

    text: str
    parts: Tuple[Expr, ...] = ()
    span: Optional[SourceSpan] = _span()


# statements ----------------------------------------------------------------


@dataclass(frozen=True)
class LocalVar(Node):
    name: str
    type_name: Optional[TypeName]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ExprStmt(Stmt):
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class LocalVarDecl(Stmt):
    declarations: Tuple[Optional[LocalVar], ...]
    value: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Block(Stmt):
    statements: Tuple[Stmt, ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class If(Stmt):
    condition: Expr
    then: Stmt
    otherwise: Optional[Stmt] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class For(Stmt):
    init: Optional[Stmt]
    condition: Optional[Expr]
    update: Optional[Expr]
    body: Stmt
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class While(Stmt):
    condition: Expr
    body: Stmt
    do_while: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Return(Stmt):
    value: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Delete(Stmt):
    target: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class EmitEvent(Stmt):
    call: Call
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Opaque(Stmt):
    """Statement outside the subset (assembly, try, break, continue, ...)"""

    keyword: str
    span: Optional[SourceSpan] = _span()


# declarations --------------------------------------------------------------


@dataclass(frozen=True)
class Parameter(Node):
    name: str
    type_name: TypeName
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class VarDecl(Node):
    name: str
    type_name: TypeName
    visibility: Visibility = Visibility.INTERNAL
    initializer: Optional[Expr] = None
    is_constant: bool = False
    is_immutable: bool = False
    span: Optional[SourceSpan] = _span()

    @property
    def occupies_storage(self) -> bool:
        return not (self.is_constant or self.is_immutable)


@dataclass(frozen=True)
class ModifierInvocation(Node):
    name: str
    args: Tuple[Expr, ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FuncDef(Node):
    name: str
    params: Tuple[Parameter, ...] = ()
    returns: Tuple[Parameter, ...] = ()
    visibility: Visibility = Visibility.PUBLIC
    mutability: Mutability = Mutability.NONPAYABLE
    modifiers: Tuple[ModifierInvocation, ...] = ()
    body: Optional[Block] = None
    is_constructor: bool = False
    is_fallback: bool = False
    is_receive: bool = False
    span: Optional[SourceSpan] = _span()

    @property
    def applied_modifiers(self) -> Tuple[str, ...]:
        return tuple(m.name for m in self.modifiers)

    @property
    def is_special(self) -> bool:
        return self.is_constructor or self.is_fallback or self.is_receive


@dataclass(frozen=True)
class ModifierDef(Node):
    name: str
    params: Tuple[Parameter, ...] = ()
    body: Optional[Block] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class EventDef(Node):
    name: str
    params: Tuple[Parameter, ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class StructDef(Node):
    name: str
    fields: Tuple[Parameter, ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class EnumDef(Node):
    name: str
    members: Tuple[str, ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class UsingFor(Node):
    library: str
    target: Optional[TypeName] = None  # None means `*`
    span: Optional[SourceSpan] = _span()


class ContractDefKind(str, Enum):
    CONTRACT = "contract"
    INTERFACE = "interface"
    LIBRARY = "library"


@dataclass(frozen=True)
class ContractDef(Node):
    name: str
    kind: ContractDefKind = ContractDefKind.CONTRACT
    parents: Tuple[str, ...] = ()
    state_vars: Tuple[VarDecl, ...] = ()
    functions: Tuple[FuncDef, ...] = ()
    modifiers: Tuple[ModifierDef, ...] = ()
    events: Tuple[EventDef, ...] = ()
    using_declarations: Tuple[UsingFor, ...] = ()
    structs: Tuple[StructDef, ...] = ()
    enums: Tuple[EnumDef, ...] = ()
    is_abstract: bool = False
    span: Optional[SourceSpan] = _span()

    def function(self, name: str) -> Optional[FuncDef]:
        for func in self.functions:
            if func.name == name:
                return func
        return None

    def fallback(self) -> Optional[FuncDef]:
        for func in self.functions:
            if func.is_fallback:
                return func
        return None


@dataclass(frozen=True)
class PragmaDirective(Node):
    raw: str
    locked: bool = False
    version: Optional[Tuple[int, int, int]] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SourceUnit(Node):
    file: str
    pragma: Optional[PragmaDirective] = None
    imports: Tuple[str, ...] = ()
    contracts: Tuple[ContractDef, ...] = ()
    structs: Tuple[StructDef, ...] = ()
    enums: Tuple[EnumDef, ...] = ()
    suppressions: Dict[int, FrozenSet[str]] = field(default_factory=dict, compare=False, repr=False)
    span: Optional[SourceSpan] = _span()

    def contract(self, name: str) -> Optional[ContractDef]:
        for contract in self.contracts:
            if contract.name == name:
                return contract
        return None

    def linearize(self, name: str) -> List[ContractDef]:
        """C3 linearization of contract ``name`` within this unit, most-derived first.

        Raises:
            UnknownContract: a base is not defined in this unit
        """
        table = {c.name: tuple(p.rsplit(".", 1)[-1] for p in c.parents) for c in self.contracts}
        return [self.contract(base) for base in c3_linearize(name, table.get)]

    def is_suppressed(self, rule_id: str, span: Optional[SourceSpan]) -> bool:
        if span is None:
            return False
        return rule_id in self.suppressions.get(span.line, frozenset())


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal of ``node`` and all its descendants"""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(list(current.children())))
