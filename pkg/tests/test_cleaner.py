import pytest

from src.utils.text_cleaner import (
    byte_length,
    decode_source,
    find_suppressions,
    normalize_newlines,
    trim_blank_lines,
)


@pytest.mark.parametrize("data, expected", [
    (b"contract C { }", "contract C { }"),
    ("\ufeffcontract C { }", "contract C { }"),
    ("\ufeffcontract C { }".encode("utf-8"), "contract C { }"),
    (b"a\r\nb\rc\n", "a\nb\nc\n"),
    (b"", ""),
])
def test_decode_source(data, expected):
    assert decode_source(data) == expected


def test_undecodable_bytes_are_replaced():
    assert decode_source(b"x\xff") == "x\ufffd"


def test_normalize_newlines():
    assert normalize_newlines("a\r\n\r\nb") == "a\n\nb"
    assert normalize_newlines("") == ""


def test_suppression_covers_the_next_line():
    text = "contract C {\n    // abcde:allow(CL-TXORIGIN, CL-SHADOW)\n    uint256 x;\n}\n"
    assert find_suppressions(text) == {3: frozenset({"CL-TXORIGIN", "CL-SHADOW"})}


def test_trailing_suppression_comment():
    text = "uint256 a; // abcde:allow(GA-INIT)\nuint256 b;\n"
    assert find_suppressions(text) == {2: frozenset({"GA-INIT"})}


def test_empty_suppression_is_ignored():
    assert find_suppressions("// abcde:allow()\nx;\n") == {}


def test_byte_length():
    assert byte_length("abc") == 3
    assert byte_length("é") == 2


def test_trim_blank_lines():
    assert trim_blank_lines("\n\na\n\n\n\nb\n\n") == "a\n\nb"
