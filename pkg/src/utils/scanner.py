"""Regex-driven tokenizer and a small recursive-descent parser base.

Both source languages (the modeling DSL and the Solidity subset) share this
machinery: a scanner that turns text into a flat token list with source spans, and
a parser base that walks the list with one token of lookahead and reports the first
unexpected token as a ParseError.
"""
import bisect
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Pattern, Sequence, Tuple

from src.model.spans import ParseError, SourceSpan

IDENT = "IDENT"
NUMBER = "NUMBER"
STRING = "STRING"
HEX = "HEX"
OP = "OP"
EOF = "EOF"

TOKEN_NAMES = {
    IDENT: "identifier",
    NUMBER: "number",
    STRING: "string",
    HEX: "hex literal",
    OP: "symbol",
    EOF: "end of input",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: SourceSpan

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        if self.kind == STRING:
            return "string"
        return f"'{self.value}'"


class LineIndex:
    """Offset to (line, column) conversion for one text"""

    def __init__(self, text: str):
        self.starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def position(self, offset: int) -> Tuple[int, int]:
        line = bisect.bisect_right(self.starts, offset) - 1
        return line + 1, offset - self.starts[line] + 1


class Scanner:
    """Tokenize text with an ordered list of ``(kind, regex)`` rules.

    Kinds starting with ``_`` are skipped (whitespace, comments). A ``_BAD_*`` kind
    produces a ParseError with the (expected, found) pair registered in
    ``bad_messages``.
    Characters no rule matches are reported and skipped.
    """

    def __init__(self, rules: Sequence[Tuple[str, str]], bad_messages: Optional[Dict[str, Tuple[str, str]]] = None):
        self.master: Pattern = re.compile(
            "|".join(f"(?P<{kind}>{regex})" for kind, regex in rules), re.DOTALL
        )
        self.bad_messages = bad_messages or {}

    def tokenize(self, text: str, file: str) -> Tuple[List[Token], List[ParseError]]:
        index = LineIndex(text)
        tokens: List[Token] = []
        errors: List[ParseError] = []
        pos = 0
        size = len(text)

        def span_at(offset: int, length: int) -> SourceSpan:
            line, column = index.position(offset)
            return SourceSpan(file, line, column, length)

        while pos < size:
            match = self.master.match(text, pos)
            if match is None or match.end() == pos:
                errors.append(ParseError(span_at(pos, 1), "token", repr(text[pos])))
                pos += 1
                continue
            kind = match.lastgroup
            value = match.group()
            if kind in self.bad_messages:
                expected, found = self.bad_messages[kind]
                errors.append(ParseError(span_at(pos, len(value)), expected, found))
            elif not kind.startswith("_"):
                tokens.append(Token(kind.rstrip("_0123456789"), value, span_at(pos, len(value))))
            pos = match.end()

        tokens.append(Token(EOF, "", span_at(size, 0)))
        return tokens, errors


class ParseAbort(Exception):
    """Unwinds the parser to the nearest recovery point"""

    def __init__(self, error: ParseError):
        super().__init__(str(error))
        self.error = error


class ParserBase:
    """Token cursor: ``ct`` is the token last consumed, ``nt`` the next one"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        self.ct: Optional[Token] = None

    @property
    def nt(self) -> Token:
        return self.tokens[self.pos]

    def lookahead(self, offset: int) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        self.ct = self.nt
        if self.nt.kind != EOF:
            self.pos += 1
        return self.ct

    def peek(self, kind: str, value: Optional[str] = None, offset: int = 0) -> bool:
        token = self.lookahead(offset)
        return token.kind == kind and (value is None or token.value == value)

    def peek_op(self, value: str, offset: int = 0) -> bool:
        return self.peek(OP, value, offset)

    def peek_kw(self, value: str, offset: int = 0) -> bool:
        return self.peek(IDENT, value, offset)

    def peek_eof(self) -> bool:
        return self.nt.kind == EOF

    def error(self, expected: str, token: Optional[Token] = None) -> ParseAbort:
        token = token or self.nt
        return ParseAbort(ParseError(token.span, expected, token.describe()))

    def match(self, kind: str, expected: Optional[str] = None) -> Token:
        if self.nt.kind != kind:
            raise self.error(expected or TOKEN_NAMES[kind])
        return self.advance()

    def match_op(self, value: str) -> Token:
        if not self.peek_op(value):
            raise self.error(f"'{value}'")
        return self.advance()

    def match_kw(self, value: str) -> Token:
        if not self.peek_kw(value):
            raise self.error(f"'{value}'")
        return self.advance()

    def accept_op(self, value: str) -> bool:
        if self.peek_op(value):
            self.advance()
            return True
        return False

    def accept_kw(self, value: str) -> bool:
        if self.peek_kw(value):
            self.advance()
            return True
        return False
