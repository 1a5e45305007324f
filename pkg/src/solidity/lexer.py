import re
from typing import List, Tuple

from src.model.spans import ParseError
from src.utils.scanner import Scanner, Token

PRAGMA = "PRAGMA"

UNITS = frozenset(
    ["wei", "gwei", "szabo", "finney", "ether", "seconds", "minutes", "hours", "days", "weeks", "years"]
)

_OPERATORS = [
    ">>>=", ">>=", "<<=", "**", "=>", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<", ">>",
    "{", "}", "(", ")", "[", "]", ";", ",", ".", ":", "?",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^", "~",
]

_RULES = [
    ("_WS", r"[ \t\n\f\v]+"),
    ("_LINE_COMMENT", r"//[^\n]*"),
    ("_BLOCK_COMMENT", r"/\*.*?\*/"),
    ("_BAD_COMMENT", r"/\*.*"),
    ("PRAGMA", r"pragma\b[^;]*;?"),
    ("HEX", r"hex(?:\"[0-9a-fA-F_]*\"|'[0-9a-fA-F_]*')"),
    ("IDENT", r"[A-Za-z_$][A-Za-z0-9_$]*"),
    ("NUMBER_1", r"0[xX]_*[0-9a-fA-F][0-9a-fA-F_]*"),
    ("_BAD_NUMBER", r"0[xX]_*"),
    ("NUMBER_2", r"(?:[0-9][0-9_]*(?:\.[0-9_]+)?|\.[0-9][0-9_]*)(?:[eE]-?[0-9]+)?"),
    ("STRING_1", r'"(?:[^"\\\n]|\\[^\n])*"'),
    ("STRING_2", r"'(?:[^'\\\n]|\\[^\n])*'"),
    ("_BAD_STRING", r"[\"'][^\n]*"),
    ("OP", "|".join(re.escape(op) for op in _OPERATORS)),
]

_SCANNER = Scanner(
    _RULES,
    {
        "_BAD_COMMENT": ("'*/'", "end of input"),
        "_BAD_STRING": ("closing quote", "end of line"),
        "_BAD_NUMBER": ("hex digits", "'0x' without digits"),
    },
)


def tokenize(text: str, file: str) -> Tuple[List[Token], List[ParseError]]:
    return _SCANNER.tokenize(text, file)


def string_value(literal: str) -> str:
    """Decode a Solidity string literal (escapes are kept except for quotes and backslashes)"""
    body = literal[1:-1]
    out = []
    chars = iter(body)
    for ch in chars:
        if ch == "\\":
            nxt = next(chars, "")
            out.append({"n": "\n", "t": "\t", "r": "\r"}.get(nxt, nxt))
        else:
            out.append(ch)
    return "".join(out)
