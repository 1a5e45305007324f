from typing import List, Sequence


class AbcdeError(Exception):
    """Base class for every failure raised by the toolchain"""


class SourceSyntaxError(AbcdeError):
    """Raised when a source text cannot be parsed.

    Carries the ordered list of ParseError records collected before giving up.
    """

    def __init__(self, errors: Sequence["ParseError"]):  # noqa: F821
        self.errors: List = list(errors)
        first = self.errors[0] if self.errors else None
        super().__init__(str(first) if first else "syntax error")


class ModelSyntaxError(SourceSyntaxError):
    """Syntax errors in an ABCDE model file"""


class SoliditySyntaxError(SourceSyntaxError):
    """Syntax errors in a Solidity source file"""


class UnknownContract(AbcdeError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown contract '{name}'")

    def __str__(self) -> str:
        return self.args[0]


class CycleError(AbcdeError):
    """Inheritance graph contains a cycle"""

    def __init__(self, cycle: Sequence[str]):
        self.cycle = list(cycle)
        super().__init__(f"inheritance cycle: {' -> '.join(self.cycle)}")


class LinearizationError(AbcdeError):
    """The C3 merge cannot find a consistent order"""

    def __init__(self, contract: str, pending: Sequence[Sequence[str]]):
        self.contract = contract
        self.pending = [list(seq) for seq in pending]
        super().__init__(
            f"cannot linearize '{contract}': inconsistent hierarchy {self.pending}"
        )


class UnknownType(AbcdeError):
    def __init__(self, type_name: str, contract: str = ""):
        self.type_name = type_name
        self.contract = contract
        where = f" in '{contract}'" if contract else ""
        super().__init__(f"cannot resolve type '{type_name}'{where}")


class ConfigError(AbcdeError):
    """Invalid configuration file or option value"""
