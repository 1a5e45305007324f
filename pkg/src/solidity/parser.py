"""Recursive-descent parser for the Solidity subset.

Declarations are parsed strictly; a malformed contract member is reported and the
parser resumes at the next member. Inside function bodies every statement the
subset does not cover (assembly, try/catch, break, a statement that fails to parse)
becomes an ``Opaque`` node, so analysis degrades instead of failing.
"""
import logging
import re
from typing import List, Optional, Tuple, Union

from src.model.errors import SoliditySyntaxError
from src.model.spans import ParseError
from src.model.typenames import (
    ArrayTypeName,
    MappingTypeName,
    TypeName,
    UserDefinedTypeName,
    is_elementary_name,
    make_type,
)
from src.model.types import Mutability, Visibility
from src.solidity import ast
from src.solidity.lexer import PRAGMA, UNITS, string_value, tokenize
from src.utils.scanner import EOF, HEX, IDENT, NUMBER, OP, STRING, ParseAbort, ParserBase, Token
from src.utils.text_cleaner import decode_source, find_suppressions

logger = logging.getLogger(__name__)

_VERSION_RE = re.compile(r"(\d+)(?:\.(\d+))?(?:\.(\d+))?")
_LOCKED_RE = re.compile(r"^=?\s*v?\d+\.\d+\.\d+$")

VISIBILITIES = {v.value: v for v in Visibility}
MUTABILITIES = {
    "payable": Mutability.PAYABLE,
    "view": Mutability.VIEW,
    "pure": Mutability.PURE,
    "constant": Mutability.VIEW,
}
LOCATIONS = frozenset(["memory", "storage", "calldata"])
CONTRACT_KEYWORDS = {
    "contract": ast.ContractDefKind.CONTRACT,
    "interface": ast.ContractDefKind.INTERFACE,
    "library": ast.ContractDefKind.LIBRARY,
}
OPAQUE_KEYWORDS = frozenset(["assembly", "try", "break", "continue", "throw"])

ASSIGN_OPS = frozenset(["=", "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<=", ">>=", ">>>="])
# binary precedence levels, loosest first
BINARY_LEVELS: Tuple[Tuple[str, ...], ...] = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("|",),
    ("^",),
    ("&",),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "/", "%"),
)
PREFIX_OPS = frozenset(["!", "~", "-", "+", "++", "--"])
MAX_ERRORS = 50


def parse_pragma(token: Token) -> Optional[ast.PragmaDirective]:
    """Interpret a ``pragma solidity`` token; other pragmas return None"""
    text = token.value[len("pragma"):].rstrip(";").strip()
    if not text.startswith("solidity"):
        return None
    raw = text[len("solidity"):].strip()
    locked = bool(_LOCKED_RE.match(raw))
    version = None
    match = _VERSION_RE.search(raw)
    if match:
        version = tuple(int(part) if part else 0 for part in match.groups())
    return ast.PragmaDirective(raw, locked, version, span=token.span)


class SolidityParser(ParserBase):
    def __init__(self, tokens: List[Token], file: str):
        super().__init__(tokens)
        self.file = file
        self.errors: List[ParseError] = []

    # helpers -----------------------------------------------------------

    def ident(self) -> Token:
        return self.match(IDENT, "identifier")

    def dotted_name(self) -> str:
        name = self.ident().value
        while self.peek_op(".") and self.peek(IDENT, offset=1):
            self.advance()
            name += "." + self.advance().value
        return name

    def skip_balanced(self, start: int) -> None:
        """Rewind to ``start`` and skip one statement or member.

        Stops after a ``;`` at nesting depth zero, after the ``}`` closing a block
        opened at depth zero, or before a closer that does not belong to the item.
        """
        self.pos = start
        depth = 0
        consumed = False
        while True:
            token = self.nt
            if token.kind == EOF:
                raise self.error("'}'")
            if token.kind == OP and token.value in "([{":
                depth += 1
            elif token.kind == OP and token.value in ")]}":
                if depth == 0:
                    if not consumed:
                        raise self.error("statement")
                    return
                depth -= 1
                if depth == 0 and token.value == "}":
                    self.advance()
                    if not self.peek_op(";"):
                        return
                    continue
            elif token.kind == OP and token.value == ";" and depth == 0:
                self.advance()
                return
            self.advance()
            consumed = True

    # types -------------------------------------------------------------

    def parse_type(self) -> TypeName:
        if self.peek_kw("mapping") and self.peek_op("(", 1):
            self.advance()
            self.match_op("(")
            key = self.parse_type()
            if self.peek(IDENT) and not self.peek_op("=>"):
                self.advance()
            self.match_op("=>")
            value = self.parse_type()
            if self.peek(IDENT):
                self.advance()
            self.match_op(")")
            result: TypeName = MappingTypeName(key, value)
        elif self.peek_kw("function"):
            raise self.error("type")
        else:
            name = self.dotted_name()
            if name == "address" and self.peek_kw("payable"):
                self.advance()
            result = make_type(name)
        while self.peek_op("["):
            self.advance()
            if self.accept_op("]"):
                result = ArrayTypeName(result, None)
            elif self.peek(NUMBER) and self.peek_op("]", 1):
                length = self.advance()
                text = length.value.replace("_", "")
                self.advance()
                if text.lower().startswith("0x"):
                    try:
                        result = ArrayTypeName(result, int(text, 16))
                    except ValueError:
                        raise self.error("array length", length) from None
                elif text.isdigit():
                    result = ArrayTypeName(result, int(text))
                else:
                    result = UserDefinedTypeName(f"{result}[{text}]")
            else:
                text = []
                while not self.peek_op("]"):
                    if self.peek_eof():
                        raise self.error("']'")
                    text.append(self.advance().value)
                self.advance()
                # symbolic length: resolved by nobody, reported as unknown type by the layout
                result = UserDefinedTypeName(f"{result}[{''.join(text)}]")
        return result

    def try_type_then_name(self) -> bool:
        """Lookahead: does a variable declaration (``T [location] name``) start here?"""
        start = self.pos
        try:
            if not self.peek(IDENT):
                return False
            self.parse_type()
            if self.peek(IDENT) and self.nt.value in LOCATIONS:
                self.advance()
            return self.peek(IDENT) and not self.peek_op("(", 1) and not self.peek_op(".", 1)
        except ParseAbort:
            return False
        finally:
            self.pos = start

    def parse_parameter(self) -> ast.Parameter:
        start = self.nt
        type_name = self.parse_type()
        while self.peek(IDENT) and self.nt.value in LOCATIONS | {"indexed", "payable"}:
            self.advance()
        name = ""
        if self.peek(IDENT):
            name = self.advance().value
        return ast.Parameter(name, type_name, span=start.span)

    def parse_parameter_list(self) -> Tuple[ast.Parameter, ...]:
        self.match_op("(")
        params = []
        if not self.peek_op(")"):
            params.append(self.parse_parameter())
            while self.accept_op(","):
                params.append(self.parse_parameter())
        self.match_op(")")
        return tuple(params)

    # expressions -------------------------------------------------------

    def parse_expression(self) -> ast.Expr:
        start = self.nt
        target = self.parse_conditional()
        if self.peek(OP) and self.nt.value in ASSIGN_OPS:
            op = self.advance().value
            value = self.parse_expression()
            return ast.Assignment(op, target, value, span=start.span)
        return target

    def parse_conditional(self) -> ast.Expr:
        start = self.nt
        condition = self.parse_binary(0)
        if self.accept_op("?"):
            when_true = self.parse_expression()
            self.match_op(":")
            when_false = self.parse_expression()
            return ast.OpaqueExpr("?:", (condition, when_true, when_false), span=start.span)
        return condition

    def parse_binary(self, level: int) -> ast.Expr:
        if level == len(BINARY_LEVELS):
            return self.parse_power()
        start = self.nt
        left = self.parse_binary(level + 1)
        while self.peek(OP) and self.nt.value in BINARY_LEVELS[level]:
            op = self.advance().value
            right = self.parse_binary(level + 1)
            left = ast.BinaryOp(op, left, right, span=start.span)
        return left

    def parse_power(self) -> ast.Expr:
        start = self.nt
        base = self.parse_unary()
        if self.accept_op("**"):
            exponent = self.parse_power()
            return ast.BinaryOp("**", base, exponent, span=start.span)
        return base

    def parse_unary(self) -> ast.Expr:
        start = self.nt
        if self.peek(OP) and self.nt.value in PREFIX_OPS:
            op = self.advance().value
            return ast.UnaryOp(op, self.parse_unary(), True, span=start.span)
        if self.peek_kw("delete"):
            self.advance()
            return ast.UnaryOp("delete", self.parse_unary(), True, span=start.span)
        expr = self.parse_postfix()
        while self.peek_op("++") or self.peek_op("--"):
            expr = ast.UnaryOp(self.advance().value, expr, False, span=start.span)
        return expr

    def parse_call_args(self) -> Tuple[Tuple[ast.Expr, ...], Tuple[str, ...]]:
        self.match_op("(")
        args: List[ast.Expr] = []
        names: List[str] = []
        if self.peek_op("{"):
            self.advance()
            while not self.peek_op("}"):
                names.append(self.ident().value)
                self.match_op(":")
                args.append(self.parse_expression())
                if not self.accept_op(","):
                    break
            self.match_op("}")
        elif not self.peek_op(")"):
            args.append(self.parse_expression())
            while self.accept_op(","):
                args.append(self.parse_expression())
        self.match_op(")")
        return tuple(args), tuple(names)

    def parse_postfix(self) -> ast.Expr:
        start = self.nt
        expr = self.parse_primary()
        while True:
            if self.peek_op("."):
                self.advance()
                member = self.ident()
                expr = ast.MemberAccess(expr, member.value, span=start.span)
            elif self.peek_op("["):
                self.advance()
                index = None
                if not self.peek_op("]"):
                    index = self.parse_expression()
                    if self.accept_op(":"):
                        # slices stay opaque
                        end = None if self.peek_op("]") else self.parse_expression()
                        parts = tuple(p for p in (index, end) if p is not None)
                        index = ast.OpaqueExpr("slice", parts, span=start.span)
                self.match_op("]")
                expr = ast.IndexAccess(expr, index, span=start.span)
            elif self.peek_op("(") or (self.peek_op("{") and self.peek(IDENT, offset=1) and self.peek_op(":", 2)):
                options: Tuple[Tuple[str, ast.Expr], ...] = ()
                if self.peek_op("{"):
                    self.advance()
                    opts = []
                    while not self.peek_op("}"):
                        name = self.ident().value
                        self.match_op(":")
                        opts.append((name, self.parse_expression()))
                        if not self.accept_op(","):
                            break
                    self.match_op("}")
                    options = tuple(opts)
                    if not self.peek_op("("):
                        expr = ast.Call(expr, (), (), options, span=start.span)
                        continue
                args, names = self.parse_call_args()
                expr = ast.Call(expr, args, names, options, span=start.span)
            else:
                return expr

    def parse_primary(self) -> ast.Expr:
        token = self.nt
        if token.kind == NUMBER:
            self.advance()
            unit = None
            if self.peek(IDENT) and self.nt.value in UNITS:
                unit = self.advance().value
            return ast.Literal(ast.LiteralKind.NUMBER, token.value, unit, span=token.span)
        if token.kind == STRING:
            self.advance()
            value = string_value(token.value)
            while self.peek(STRING):
                value += string_value(self.advance().value)
            return ast.Literal(ast.LiteralKind.STRING, value, span=token.span)
        if token.kind == HEX:
            self.advance()
            return ast.Literal(ast.LiteralKind.HEX, token.value, span=token.span)
        if token.kind == IDENT:
            if token.value in ("true", "false"):
                self.advance()
                return ast.Literal(ast.LiteralKind.BOOL, token.value, span=token.span)
            if token.value == "new":
                self.advance()
                type_name = self.parse_type()
                return ast.OpaqueExpr(f"new {type_name}", span=token.span)
            if token.value == "payable" and self.peek_op("(", 1):
                self.advance()
                return ast.Identifier("payable", span=token.span)
            if is_elementary_name(token.value) and self.peek_op("[", 1) and self.peek_op("]", 2):
                # `uint[]` as a type expression, e.g. in abi.decode
                type_name = self.parse_type()
                return ast.Identifier(str(type_name), span=token.span)
            self.advance()
            return ast.Identifier(token.value, span=token.span)
        if token.kind == OP and token.value == "(":
            self.advance()
            elements: List[Optional[ast.Expr]] = []
            while True:
                if self.peek_op(",") or self.peek_op(")"):
                    elements.append(None)
                else:
                    elements.append(self.parse_expression())
                if not self.accept_op(","):
                    break
            self.match_op(")")
            if len(elements) == 1 and elements[0] is not None:
                return elements[0]
            return ast.TupleExpr(tuple(elements), span=token.span)
        if token.kind == OP and token.value == "[":
            self.advance()
            parts = []
            if not self.peek_op("]"):
                parts.append(self.parse_expression())
                while self.accept_op(","):
                    parts.append(self.parse_expression())
            self.match_op("]")
            return ast.OpaqueExpr("[]", tuple(parts), span=token.span)
        raise self.error("expression")

    # statements --------------------------------------------------------

    def parse_block(self) -> ast.Block:
        start = self.match_op("{")
        statements = []
        while not self.peek_op("}"):
            if self.peek_eof():
                raise self.error("'}'")
            statements.append(self.parse_statement())
        self.match_op("}")
        return ast.Block(tuple(statements), span=start.span)

    def parse_statement(self) -> ast.Stmt:
        start = self.pos
        token = self.nt
        try:
            return self.parse_statement_strict()
        except ParseAbort as abort:
            logger.debug(f"{self.file}: opaque statement at {token.span}: {abort.error.message}")
            self.skip_balanced(start)
            return ast.Opaque(token.value or "?", span=token.span)

    def parse_local_var(self) -> ast.LocalVar:
        start = self.nt
        type_name = self.parse_type()
        while self.peek(IDENT) and self.nt.value in LOCATIONS:
            self.advance()
        name = self.ident()
        return ast.LocalVar(name.value, type_name, span=start.span)

    def try_tuple_declaration(self) -> Optional[ast.LocalVarDecl]:
        start = self.pos
        token = self.nt
        try:
            self.match_op("(")
            declarations: List[Optional[ast.LocalVar]] = []
            while True:
                if self.peek_op(",") or self.peek_op(")"):
                    declarations.append(None)
                elif self.peek_kw("var") and self.peek(IDENT, offset=1):
                    self.advance()
                    name = self.advance()
                    declarations.append(ast.LocalVar(name.value, None, span=name.span))
                else:
                    if not self.try_type_then_name():
                        raise self.error("declaration")
                    declarations.append(self.parse_local_var())
                if not self.accept_op(","):
                    break
            self.match_op(")")
            value = None
            if self.accept_op("="):
                value = self.parse_expression()
            self.match_op(";")
            return ast.LocalVarDecl(tuple(declarations), value, span=token.span)
        except ParseAbort:
            self.pos = start
            return None

    def parse_statement_strict(self) -> ast.Stmt:
        token = self.nt
        word = token.value if token.kind == IDENT else None

        if self.peek_op("{"):
            return self.parse_block()
        if word == "unchecked" and self.peek_op("{", 1):
            self.advance()
            return self.parse_block()
        if word == "if":
            self.advance()
            self.match_op("(")
            condition = self.parse_expression()
            self.match_op(")")
            then = self.parse_statement()
            otherwise = None
            if self.accept_kw("else"):
                otherwise = self.parse_statement()
            return ast.If(condition, then, otherwise, span=token.span)
        if word == "for":
            self.advance()
            self.match_op("(")
            init: Optional[ast.Stmt] = None
            if not self.accept_op(";"):
                init = self.parse_simple_statement()
            condition = None
            if not self.peek_op(";"):
                condition = self.parse_expression()
            self.match_op(";")
            update = None
            if not self.peek_op(")"):
                update = self.parse_expression()
            self.match_op(")")
            body = self.parse_statement()
            return ast.For(init, condition, update, body, span=token.span)
        if word == "while":
            self.advance()
            self.match_op("(")
            condition = self.parse_expression()
            self.match_op(")")
            return ast.While(condition, self.parse_statement(), span=token.span)
        if word == "do":
            self.advance()
            body = self.parse_statement()
            self.match_kw("while")
            self.match_op("(")
            condition = self.parse_expression()
            self.match_op(")")
            self.match_op(";")
            return ast.While(condition, body, True, span=token.span)
        if word == "return":
            self.advance()
            value = None
            if not self.peek_op(";"):
                value = self.parse_expression()
            self.match_op(";")
            return ast.Return(value, span=token.span)
        if word == "delete":
            self.advance()
            target = self.parse_expression()
            self.match_op(";")
            return ast.Delete(target, span=token.span)
        if word == "emit":
            self.advance()
            call = self.parse_expression()
            if not isinstance(call, ast.Call):
                raise self.error("event call", token)
            self.match_op(";")
            return ast.EmitEvent(call, span=token.span)
        if word in OPAQUE_KEYWORDS or (word == "revert" and self.peek(IDENT, offset=1)):
            raise self.error("statement")
        return self.parse_simple_statement()

    def parse_simple_statement(self) -> ast.Stmt:
        """Variable declaration or expression statement, terminated by ``;``"""
        token = self.nt
        if self.peek_op("("):
            declaration = self.try_tuple_declaration()
            if declaration is not None:
                return declaration
        if self.peek_kw("var") and self.peek(IDENT, offset=1):
            self.advance()
            name = self.advance()
            local = ast.LocalVar(name.value, None, span=name.span)
            value = None
            if self.accept_op("="):
                value = self.parse_expression()
            self.match_op(";")
            return ast.LocalVarDecl((local,), value, span=token.span)
        if self.try_type_then_name():
            local = self.parse_local_var()
            value = None
            if self.accept_op("="):
                value = self.parse_expression()
            self.match_op(";")
            return ast.LocalVarDecl((local,), value, span=token.span)
        expr = self.parse_expression()
        self.match_op(";")
        return ast.ExprStmt(expr, span=token.span)

    # contract members --------------------------------------------------

    def parse_function(self, contract: str) -> ast.FuncDef:
        keyword = self.advance()
        name = ""
        is_constructor = keyword.value == "constructor"
        is_fallback = keyword.value == "fallback"
        is_receive = keyword.value == "receive"
        if keyword.value == "function":
            if self.peek(IDENT):
                name = self.advance().value
            else:
                is_fallback = True
            if name == contract:
                is_constructor = True
        elif is_fallback or is_receive:
            name = keyword.value
        elif is_constructor:
            name = "constructor"
        params = self.parse_parameter_list()

        visibility = Visibility.PUBLIC
        mutability = Mutability.NONPAYABLE
        modifiers: List[ast.ModifierInvocation] = []
        returns: Tuple[ast.Parameter, ...] = ()
        while True:
            if self.peek(IDENT) and self.nt.value in VISIBILITIES:
                visibility = VISIBILITIES[self.advance().value]
            elif self.peek(IDENT) and self.nt.value in MUTABILITIES:
                mutability = MUTABILITIES[self.advance().value]
            elif self.peek_kw("virtual"):
                self.advance()
            elif self.peek_kw("override"):
                self.advance()
                if self.peek_op("("):
                    self.advance()
                    self.dotted_name()
                    while self.accept_op(","):
                        self.dotted_name()
                    self.match_op(")")
            elif self.peek_kw("returns"):
                self.advance()
                returns = self.parse_parameter_list()
            elif self.peek(IDENT):
                start = self.nt
                mod_name = self.dotted_name()
                args: Tuple[ast.Expr, ...] = ()
                if self.peek_op("("):
                    args, _ = self.parse_call_args()
                modifiers.append(ast.ModifierInvocation(mod_name, args, span=start.span))
            else:
                break

        body = None
        if not self.accept_op(";"):
            body = self.parse_block()
        return ast.FuncDef(
            name,
            params,
            returns,
            visibility,
            mutability,
            tuple(modifiers),
            body,
            is_constructor,
            is_fallback,
            is_receive,
            span=keyword.span,
        )

    def parse_modifier(self) -> ast.ModifierDef:
        keyword = self.advance()
        name = self.ident()
        params: Tuple[ast.Parameter, ...] = ()
        if self.peek_op("("):
            params = self.parse_parameter_list()
        while self.peek_kw("virtual") or self.peek_kw("override"):
            self.advance()
        body = None
        if not self.accept_op(";"):
            body = self.parse_block()
        return ast.ModifierDef(name.value, params, body, span=keyword.span)

    def parse_event(self) -> ast.EventDef:
        keyword = self.advance()
        name = self.ident()
        params = self.parse_parameter_list()
        self.accept_kw("anonymous")
        self.match_op(";")
        return ast.EventDef(name.value, params, span=keyword.span)

    def parse_struct(self) -> ast.StructDef:
        keyword = self.advance()
        name = self.ident()
        self.match_op("{")
        members = []
        while not self.peek_op("}"):
            start = self.nt
            type_name = self.parse_type()
            member = self.ident()
            self.match_op(";")
            members.append(ast.Parameter(member.value, type_name, span=start.span))
        self.match_op("}")
        return ast.StructDef(name.value, tuple(members), span=keyword.span)

    def parse_enum(self) -> ast.EnumDef:
        keyword = self.advance()
        name = self.ident()
        self.match_op("{")
        members = []
        if not self.peek_op("}"):
            members.append(self.ident().value)
            while self.accept_op(","):
                if self.peek_op("}"):
                    break
                members.append(self.ident().value)
        self.match_op("}")
        return ast.EnumDef(name.value, tuple(members), span=keyword.span)

    def parse_using(self) -> ast.UsingFor:
        keyword = self.advance()
        if self.peek_op("{"):
            # 0.8 `using {f, g} for T` binds free functions; keep the first name
            self.advance()
            library = self.dotted_name()
            while not self.peek_op("}"):
                if self.peek_eof():
                    raise self.error("'}'")
                self.advance()
            self.advance()
        else:
            library = self.dotted_name()
        self.match_kw("for")
        target = None
        if not self.accept_op("*"):
            target = self.parse_type()
        self.accept_kw("global")
        self.match_op(";")
        return ast.UsingFor(library, target, span=keyword.span)

    def parse_state_var(self) -> ast.VarDecl:
        start = self.nt
        type_name = self.parse_type()
        visibility = Visibility.INTERNAL
        constant = immutable = False
        while self.peek(IDENT) and not (self.peek_op("=", 1) or self.peek_op(";", 1)):
            word = self.advance().value
            if word in ("public", "internal", "private"):
                visibility = VISIBILITIES[word]
            elif word == "constant":
                constant = True
            elif word == "immutable":
                immutable = True
            elif word == "override":
                if self.peek_op("("):
                    self.skip_parenthesized()
            elif word != "transient":
                raise self.error("state variable qualifier", self.ct)
        name = self.ident()
        initializer = None
        if self.accept_op("="):
            initializer = self.parse_expression()
        self.match_op(";")
        if constant and initializer is None:
            raise self.error("initializer for constant", name)
        return ast.VarDecl(
            name.value, type_name, visibility, initializer, constant, immutable, span=name.span
        )

    def skip_parenthesized(self) -> None:
        self.match_op("(")
        depth = 1
        while depth:
            if self.peek_eof():
                raise self.error("')'")
            token = self.advance()
            if token.value == "(" and token.kind == OP:
                depth += 1
            elif token.value == ")" and token.kind == OP:
                depth -= 1

    def parse_contract(self) -> ast.ContractDef:
        is_abstract = self.accept_kw("abstract")
        keyword = self.advance()
        kind = CONTRACT_KEYWORDS[keyword.value]
        name = self.ident()
        parents: List[str] = []
        if self.accept_kw("is"):
            while True:
                parents.append(self.dotted_name())
                if self.peek_op("("):
                    self.skip_parenthesized()
                if not self.accept_op(","):
                    break
        self.match_op("{")

        members = {
            "state_vars": [], "functions": [], "modifiers": [], "events": [],
            "using": [], "structs": [], "enums": [],
        }
        handlers: dict = {
            "function": ("functions", lambda: self.parse_function(name.value)),
            "constructor": ("functions", lambda: self.parse_function(name.value)),
            "modifier": ("modifiers", self.parse_modifier),
            "event": ("events", self.parse_event),
            "struct": ("structs", self.parse_struct),
            "enum": ("enums", self.parse_enum),
            "using": ("using", self.parse_using),
        }
        while not self.peek_op("}"):
            if self.peek_eof():
                raise self.error("'}'")
            start = self.pos
            try:
                word = self.nt.value if self.peek(IDENT) else None
                if word in ("fallback", "receive") and self.peek_op("(", 1):
                    members["functions"].append(self.parse_function(name.value))
                elif word == "function" and self.peek_op("(", 1) and self._is_function_type():
                    logger.info(f"{self.file}: function-typed state variable at {self.nt.span} ignored")
                    self.skip_balanced(start)
                elif word in handlers:
                    key, handler = handlers[word]
                    members[key].append(handler())
                elif word == "error":
                    self.skip_balanced(start)
                elif self.peek(IDENT):
                    members["state_vars"].append(self.parse_state_var())
                else:
                    raise self.error("contract member")
            except ParseAbort as abort:
                self.errors.append(abort.error)
                if len(self.errors) >= MAX_ERRORS:
                    raise
                self.recover_member(start)
        self.match_op("}")

        self.check_fallbacks(name.value, members["functions"])
        return ast.ContractDef(
            name.value,
            kind,
            tuple(parents),
            tuple(members["state_vars"]),
            tuple(members["functions"]),
            tuple(members["modifiers"]),
            tuple(members["events"]),
            tuple(members["using"]),
            tuple(members["structs"]),
            tuple(members["enums"]),
            is_abstract,
            span=keyword.span,
        )

    def _is_function_type(self) -> bool:
        """``function (uint) external f;`` declares a state variable of function type"""
        depth = 0
        offset = 1
        while True:
            token = self.lookahead(offset)
            if token.kind == EOF:
                return False
            if token.kind == OP and token.value == "(":
                depth += 1
            elif token.kind == OP and token.value == ")":
                depth -= 1
                if depth == 0:
                    break
            offset += 1
        while True:
            offset += 1
            token = self.lookahead(offset)
            if token.kind == OP:
                return token.value in (";", "=")
            if token.kind != IDENT:
                return False

    def recover_member(self, start: int) -> None:
        try:
            self.skip_balanced(start)
        except ParseAbort:
            # the member swallowed the closing brace; stop at it
            self.pos = start + 1
            while not (self.peek_op("}") or self.peek_eof()):
                self.advance()

    def check_fallbacks(self, contract: str, functions: List[ast.FuncDef]) -> None:
        fallbacks = [f for f in functions if f.is_fallback]
        for extra in fallbacks[1:]:
            self.errors.append(
                ParseError(extra.span, f"at most one fallback function in '{contract}'", "another one")
            )

    # top level ---------------------------------------------------------

    def parse_source_unit(self) -> Optional[ast.SourceUnit]:
        pragma: Optional[ast.PragmaDirective] = None
        imports: List[str] = []
        contracts: List[ast.ContractDef] = []
        structs: List[ast.StructDef] = []
        enums: List[ast.EnumDef] = []
        names = set()

        while not self.peek_eof():
            start = self.pos
            token = self.nt
            try:
                if token.kind == PRAGMA:
                    self.advance()
                    directive = parse_pragma(token)
                    if directive is not None and pragma is None:
                        pragma = directive
                elif self.peek_kw("import"):
                    self.advance()
                    while not self.peek_op(";"):
                        if self.peek_eof():
                            raise self.error("';'")
                        if self.peek(STRING):
                            imports.append(string_value(self.nt.value))
                        self.advance()
                    self.advance()
                elif token.kind == IDENT and (token.value in CONTRACT_KEYWORDS or (
                    token.value == "abstract" and self.peek_kw("contract", 1)
                )):
                    contract = self.parse_contract()
                    if contract.name in names:
                        self.errors.append(
                            ParseError(contract.span, "unique contract name", f"second '{contract.name}'")
                        )
                    names.add(contract.name)
                    contracts.append(contract)
                elif self.peek_kw("struct"):
                    structs.append(self.parse_struct())
                elif self.peek_kw("enum"):
                    enums.append(self.parse_enum())
                elif token.kind == IDENT:
                    logger.debug(f"{self.file}: skipping file-level '{token.value}' at {token.span}")
                    self.skip_balanced(start)
                else:
                    raise self.error("declaration")
            except ParseAbort as abort:
                if abort.error not in self.errors:
                    self.errors.append(abort.error)
                return None

        if self.errors:
            return None
        return ast.SourceUnit(
            self.file,
            pragma,
            tuple(imports),
            tuple(contracts),
            tuple(structs),
            tuple(enums),
        )


def parse_solidity(text: Union[str, bytes], file: str = "<solidity>") -> ast.SourceUnit:
    """Parse Solidity source text into a SourceUnit.

    Raises:
        SoliditySyntaxError: with the ordered ParseErrors on lexical or structural failure
    """
    source = decode_source(text)
    tokens, errors = tokenize(source, file)
    parser = SolidityParser(tokens, file)
    unit = None
    if not errors:
        try:
            unit = parser.parse_source_unit()
        except ParseAbort:
            unit = None
        except RecursionError:
            parser.errors.append(ParseError(parser.nt.span, "shallower nesting", parser.nt.describe()))

    errors = sorted(errors + parser.errors, key=lambda e: e.span)
    if errors or unit is None:
        if not errors:
            errors = [ParseError(parser.nt.span, "declaration", parser.nt.describe())]
        logger.info(f"{file}: {len(errors)} syntax error(s), first: {errors[0]}")
        raise SoliditySyntaxError(errors)

    unit = ast.SourceUnit(
        unit.file,
        unit.pragma,
        unit.imports,
        unit.contracts,
        unit.structs,
        unit.enums,
        suppressions=find_suppressions(source),
    )
    logger.debug(f"parsed {file}: {len(unit.contracts)} contract(s)")
    return unit
