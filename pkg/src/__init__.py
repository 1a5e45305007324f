"""abcde-kit: design and audit toolchain for smart-contract systems."""

__version__ = "0.1.0"
