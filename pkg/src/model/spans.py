from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class SourceSpan:
    """Location of a construct in a source file (1-based line and column)"""

    file: str
    line: int
    column: int
    length: int = 0

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"invalid source position {self.line}:{self.column}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    expected: str
    found: str

    def __post_init__(self):
        if not self.expected:
            raise ValueError("ParseError.expected must not be empty")

    @property
    def message(self) -> str:
        return f"expected {self.expected}, found {self.found}"

    def __str__(self) -> str:
        return f"{self.span}: {self.message}"
