"""Recursive-descent parser for the ABCDE modeling DSL.

The parser is a superset of the published grammar: top-level items may come in any
order, interfaces and libraries accept the same sections as contracts, modifiers may
carry a parameter list and a guard description, arrays may be fixed-size and members
may be followed by ``;``.
"""
import logging
from typing import List, Optional, Set, Tuple, Union

from src.dsl.lexer import ARROWS, tokenize, unquote
from src.model.errors import ModelSyntaxError
from src.model.spans import ParseError
from src.model.typenames import (
    ArrayTypeName,
    MappingTypeName,
    TypeName,
    make_type,
)
from src.model.types import (
    ActorDecl,
    ActorKind,
    ContractDecl,
    ContractKind,
    EnumDecl,
    EventDecl,
    FunctionSig,
    Message,
    MessageKind,
    ModifierDecl,
    Mutability,
    Param,
    Participant,
    PatternId,
    Scenario,
    StateVar,
    StructDecl,
    SystemModel,
    Visibility,
)
from src.utils.scanner import IDENT, NUMBER, STRING, ParseAbort, ParserBase, Token
from src.utils.text_cleaner import decode_source

logger = logging.getLogger(__name__)

TOP_KEYWORDS = frozenset(
    ["goal", "actor", "contract", "interface", "library", "struct", "enum", "scenario"]
)
SECTIONS = ("state", "events", "modifiers", "functions")
VISIBILITIES = {v.value: v for v in Visibility}
STATE_VISIBILITIES = ("public", "internal", "private")
MUTABILITIES = {"payable": Mutability.PAYABLE, "view": Mutability.VIEW, "pure": Mutability.PURE}
DECL_KINDS = {
    "contract": ContractKind.CONTRACT,
    "interface": ContractKind.INTERFACE,
    "library": ContractKind.LIBRARY_CONTRACT,
}
MAX_ERRORS = 50


class _Members:
    def __init__(self):
        self.state_vars: List[StateVar] = []
        self.events: List[EventDecl] = []
        self.modifiers: List[ModifierDecl] = []
        self.functions: List[FunctionSig] = []


class ModelParser(ParserBase):
    def __init__(self, tokens: List[Token], file: str):
        super().__init__(tokens)
        self.file = file
        self.errors: List[ParseError] = []

    # helpers -----------------------------------------------------------

    def ident(self) -> Token:
        return self.match(IDENT, "identifier")

    def skip_semis(self) -> None:
        while self.accept_op(";"):
            pass

    def ident_list(self) -> List[Token]:
        names = [self.ident()]
        while self.accept_op(","):
            names.append(self.ident())
        return names

    def string(self) -> str:
        return unquote(self.match(STRING, "string").value)

    def peek_qualifier(self, words, offset: int = 0) -> bool:
        """An IDENT from ``words`` that is not itself starting a member (``name:`` / ``name(``)"""
        token = self.lookahead(offset)
        if token.kind != IDENT or token.value not in words:
            return False
        return not (self.peek_op(":", offset + 1) or self.peek_op("(", offset + 1))

    # types -------------------------------------------------------------

    def parse_type(self) -> TypeName:
        if self.peek_kw("mapping") and self.peek_op("(", 1):
            self.advance()
            self.match_op("(")
            key = self.parse_type()
            self.match_op("=>")
            value = self.parse_type()
            self.match_op(")")
            result: TypeName = MappingTypeName(key, value)
        elif self.peek(IDENT):
            result = make_type(self.advance().value)
        else:
            raise self.error("type")
        while self.peek_op("["):
            self.advance()
            length = None
            if self.peek(NUMBER):
                length = int(self.advance().value)
            self.match_op("]")
            result = ArrayTypeName(result, length)
        return result

    def parse_params(self) -> Tuple[Param, ...]:
        self.match_op("(")
        params = []
        if not self.peek_op(")"):
            while True:
                name = self.ident()
                self.match_op(":")
                params.append(Param(name.value, self.parse_type()))
                if not self.accept_op(","):
                    break
        self.match_op(")")
        return tuple(params)

    # members -----------------------------------------------------------

    def parse_state_var(self) -> StateVar:
        name = self.ident()
        self.match_op(":")
        type_name = self.parse_type()
        visibility = Visibility.INTERNAL
        if self.peek_qualifier(STATE_VISIBILITIES):
            visibility = VISIBILITIES[self.advance().value]
        self.skip_semis()
        return StateVar(name.value, type_name, visibility, span=name.span)

    def parse_event(self) -> EventDecl:
        name = self.ident()
        params = self.parse_params()
        self.skip_semis()
        return EventDecl(name.value, params, span=name.span)

    def parse_modifier(self) -> ModifierDecl:
        name = self.ident()
        params: Tuple[Param, ...] = ()
        if self.peek_op("("):
            params = self.parse_params()
        guard = None
        if self.peek(STRING):
            guard = self.string()
        self.skip_semis()
        return ModifierDecl(name.value, params, guard, span=name.span)

    def parse_function(self, has_body: bool) -> FunctionSig:
        name = self.ident()
        params = self.parse_params()
        visibility = Visibility.PUBLIC
        mutability = Mutability.NONPAYABLE
        applied: Tuple[str, ...] = ()
        returns: Tuple[TypeName, ...] = ()
        if self.peek_qualifier(VISIBILITIES):
            visibility = VISIBILITIES[self.advance().value]
        if self.peek_qualifier(MUTABILITIES):
            mutability = MUTABILITIES[self.advance().value]
        if self.peek_kw("uses") and self.peek_op("(", 1):
            self.advance()
            self.match_op("(")
            applied = tuple(t.value for t in self.ident_list())
            self.match_op(")")
        if self.peek_kw("returns") and self.peek_op("(", 1):
            self.advance()
            self.match_op("(")
            types = [self.parse_type()]
            while self.accept_op(","):
                types.append(self.parse_type())
            self.match_op(")")
            returns = tuple(types)
        self.skip_semis()
        return FunctionSig(
            name.value, params, returns, visibility, mutability, applied, has_body, span=name.span
        )

    def parse_section(self, members: _Members, has_body: bool) -> None:
        section = self.advance().value
        self.match_op("{")
        while not self.peek_op("}"):
            if self.peek_eof():
                raise self.error("'}'")
            if section == "state":
                members.state_vars.append(self.parse_state_var())
            elif section == "events":
                members.events.append(self.parse_event())
            elif section == "modifiers":
                members.modifiers.append(self.parse_modifier())
            else:
                members.functions.append(self.parse_function(has_body))
        self.match_op("}")
        self.skip_semis()

    # declarations ------------------------------------------------------

    def parse_contract(self) -> ContractDecl:
        keyword = self.advance()
        kind = DECL_KINDS[keyword.value]
        name = self.ident()
        parents: Tuple[str, ...] = ()
        if self.accept_kw("is"):
            parents = tuple(t.value for t in self.ident_list())
        tags: Set[PatternId] = set()
        if self.accept_op("@"):
            self.match_kw("pattern")
            self.match_op("(")
            while True:
                tag = self.ident()
                if tag.value not in PatternId.__members__:
                    raise self.error("pattern id", tag)
                tags.add(PatternId(tag.value))
                if not self.accept_op(","):
                    break
            self.match_op(")")
        self.match_op("{")
        has_body = kind is not ContractKind.INTERFACE
        members = _Members()
        while not self.peek_op("}"):
            if self.peek(IDENT) and self.nt.value in SECTIONS and self.peek_op("{", 1):
                self.parse_section(members, has_body)
            elif kind is not ContractKind.CONTRACT and self.peek(IDENT):
                members.functions.append(self.parse_function(has_body))
            else:
                raise self.error("section")
        self.match_op("}")
        return ContractDecl(
            name.value,
            kind,
            parents,
            tuple(members.state_vars),
            tuple(members.events),
            tuple(members.modifiers),
            tuple(members.functions),
            frozenset(tags),
            span=keyword.span,
        )

    def parse_struct(self) -> StructDecl:
        keyword = self.advance()
        name = self.ident()
        self.match_op("{")
        fields = []
        while not self.peek_op("}"):
            field_name = self.ident()
            self.match_op(":")
            fields.append(Param(field_name.value, self.parse_type()))
            while self.accept_op(";") or self.accept_op(","):
                pass
        self.match_op("}")
        return StructDecl(name.value, tuple(fields), span=keyword.span)

    def parse_enum(self) -> EnumDecl:
        keyword = self.advance()
        name = self.ident()
        self.match_op("{")
        members = tuple(t.value for t in self.ident_list())
        self.match_op("}")
        return EnumDecl(name.value, members, span=keyword.span)

    def parse_actor(self) -> ActorDecl:
        keyword = self.advance()
        name = self.ident()
        self.match_op(":")
        return ActorDecl(name.value, self.parse_actor_kind(), span=keyword.span)

    def parse_actor_kind(self) -> ActorKind:
        token = self.ident()
        try:
            return ActorKind(token.value)
        except ValueError:
            raise self.error("actor kind", token) from None

    # scenarios ---------------------------------------------------------

    def parse_participant(self) -> Participant:
        keyword = self.advance()
        alias = self.ident()
        self.match_op(":")
        kind = self.parse_actor_kind()
        contract = None
        if (
            kind is ActorKind.CONTRACT
            and self.peek(IDENT)
            and self.nt.value != "participant"
            and not any(self.peek_op(arrow, 1) for arrow in ARROWS)
        ):
            contract = self.advance().value
        self.skip_semis()
        return Participant(alias.value, kind, contract, span=keyword.span)

    def parse_message_kind(self) -> MessageKind:
        first = self.ident()
        text = first.value
        while self.peek_op("-") and self.peek(IDENT, offset=1):
            self.advance()
            text += "-" + self.advance().value
        try:
            return MessageKind(text)
        except ValueError:
            raise self.error("message kind", first) from None

    def parse_message(self) -> Message:
        sender = self.ident()
        if self.peek_op("-->"):
            dashed = True
        elif self.peek_op("->"):
            dashed = False
        else:
            raise self.error("'->'")
        self.advance()
        receiver = self.ident()
        self.match_op(":")
        label = self.string()
        self.match_op("[")
        kind = self.parse_message_kind()
        self.match_op("]")
        self.skip_semis()
        return Message(sender.value, receiver.value, label, kind, dashed, span=sender.span)

    def parse_scenario(self) -> Scenario:
        keyword = self.advance()
        name = self.ident()
        self.match_op("{")
        participants = []
        messages = []
        while not self.peek_op("}"):
            if self.peek_kw("participant") and self.peek(IDENT, offset=1):
                participants.append(self.parse_participant())
            elif self.peek(IDENT):
                messages.append(self.parse_message())
            else:
                raise self.error("participant or message")
        self.match_op("}")
        return Scenario(name.value, tuple(participants), tuple(messages), span=keyword.span)

    # top level ---------------------------------------------------------

    def recover(self, start: int) -> None:
        """Skip to the next top-level keyword outside the braces of the broken item"""
        depth = 0
        self.pos = start
        self.advance()
        while not self.peek_eof():
            if self.peek_op("{"):
                depth += 1
            elif self.peek_op("}"):
                if depth == 0:
                    return
                depth -= 1
            elif depth == 0 and self.peek(IDENT) and self.nt.value in TOP_KEYWORDS:
                return
            self.advance()

    def parse_item(self, parts: dict) -> None:
        word = self.nt.value if self.peek(IDENT) else None
        if word == "goal":
            keyword = self.advance()
            if parts["goal"] is not None:
                raise self.error("declaration", keyword)
            parts["goal"] = self.string()
        elif word == "actor":
            parts["actors"].append(self.parse_actor())
        elif word in DECL_KINDS:
            parts["declarations"].append(self.parse_contract())
        elif word == "struct":
            parts["declarations"].append(self.parse_struct())
        elif word == "enum":
            parts["declarations"].append(self.parse_enum())
        elif word == "scenario":
            parts["scenarios"].append(self.parse_scenario())
        else:
            raise self.error("declaration")
        self.skip_semis()

    def parse_model(self) -> Optional[SystemModel]:
        try:
            keyword = self.match_kw("system")
            name = self.ident()
            self.match_op("{")
        except ParseAbort as abort:
            self.errors.append(abort.error)
            return None

        parts = {"goal": None, "actors": [], "declarations": [], "scenarios": []}
        while not self.peek_op("}") and not self.peek_eof():
            start = self.pos
            try:
                self.parse_item(parts)
            except ParseAbort as abort:
                self.errors.append(abort.error)
                if len(self.errors) >= MAX_ERRORS:
                    return None
                self.recover(start)

        try:
            self.match_op("}")
            if not self.peek_eof():
                raise self.error("end of input")
        except ParseAbort as abort:
            self.errors.append(abort.error)

        if self.errors:
            return None
        return SystemModel(
            name.value,
            parts["goal"],
            tuple(parts["actors"]),
            tuple(parts["declarations"]),
            tuple(parts["scenarios"]),
            span=keyword.span,
        )


def parse_model(text: Union[str, bytes], file: str = "<model>") -> SystemModel:
    """Parse ABCDE model text.

    Args:
        text: model source (bytes are decoded as UTF-8)
        file: path recorded in every source span

    Returns:
        The parsed SystemModel; every declaration carries its SourceSpan.

    Raises:
        ModelSyntaxError: with the ordered list of ParseErrors when the text is malformed
    """
    source = decode_source(text)
    tokens, errors = tokenize(source, file)
    parser = ModelParser(tokens, file)
    try:
        model = parser.parse_model()
    except RecursionError:
        model = None
        parser.errors.append(ParseError(parser.nt.span, "shallower nesting", parser.nt.describe()))

    errors = sorted(errors + parser.errors, key=lambda e: e.span)
    if errors:
        logger.info(f"{file}: {len(errors)} syntax error(s), first: {errors[0]}")
        raise ModelSyntaxError(errors)
    logger.debug(f"parsed model '{model.name}' from {file}")
    return model
