import re
from typing import Dict, FrozenSet, Union

_SUPPRESS_RE = re.compile(r"//\s*abcde:allow\(([^)]*)\)")


def decode_source(data: Union[bytes, str]) -> str:
    """Decode source bytes as UTF-8 and normalize newlines.

    Undecodable bytes are replaced rather than rejected so that parsers always
    receive text and report syntax errors instead of crashing.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    if data.startswith("\ufeff"):
        data = data[1:]
    return normalize_newlines(data)


def normalize_newlines(text: str) -> str:
    """Turn CRLF and lone CR line endings into LF"""
    if not text:
        return ""
    return text.replace("\r\n", "\n").replace("\r", "\n")


def find_suppressions(text: str) -> Dict[int, FrozenSet[str]]:
    """Map line numbers to the rule ids silenced on them.

    A ``// abcde:allow(RULE-A, RULE-B)`` comment silences the listed rules on the
    line that follows it, and on that line only.
    """
    result: Dict[int, FrozenSet[str]] = {}
    for number, line in enumerate(normalize_newlines(text).split("\n"), 1):
        match = _SUPPRESS_RE.search(line)
        if not match:
            continue
        ids = frozenset(part.strip() for part in match.group(1).split(",") if part.strip())
        if ids:
            result[number + 1] = result.get(number + 1, frozenset()) | ids
    return result


def byte_length(text: str) -> int:
    return len(text.encode("utf-8"))


def trim_blank_lines(text: str) -> str:
    """Strip surrounding whitespace and collapse runs of blank lines to one"""
    return re.sub(r"\n{3,}", "\n\n", text.strip())
