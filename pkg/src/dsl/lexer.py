from typing import List, Tuple

from src.model.spans import ParseError
from src.utils.scanner import Scanner, Token

ARROWS = ("->", "-->")

_RULES = [
    ("_WS", r"[ \t\n\f\v]+"),
    ("_COMMENT", r"//[^\n]*"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("NUMBER", r"[0-9]+"),
    ("STRING", r'"(?:[^"\\\n]|\\[^\n])*"'),
    ("_BAD_STRING", r'"(?:[^"\\\n]|\\[^\n])*\\?'),
    ("OP", r"-->|->|=>|[{}()\[\]:,;@-]"),
]

_SCANNER = Scanner(_RULES, {"_BAD_STRING": ("'\"'", "end of line")})

_ESCAPES = {"n": "\n", "r": "\r"}


def tokenize(text: str, file: str) -> Tuple[List[Token], List[ParseError]]:
    """Split model text into tokens; unknown characters are reported and skipped"""
    return _SCANNER.tokenize(text, file)


def unquote(literal: str) -> str:
    body = literal[1:-1]
    out = []
    chars = iter(body)
    for ch in chars:
        if ch == "\\":
            nxt = next(chars, "")
            out.append(_ESCAPES.get(nxt, nxt))
        else:
            out.append(ch)
    return "".join(out)


def quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")
    return f'"{escaped}"'
