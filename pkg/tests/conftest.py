import os

import pytest

from src.dsl.parser import parse_model
from src.solidity.parser import parse_solidity

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
MODELS_DIR = os.path.join(FIXTURES, "models")
VULNERABLE_DIR = os.path.join(FIXTURES, "lint", "vulnerable")
CLEAN_DIR = os.path.join(FIXTURES, "lint", "clean")
LAYOUT_DIR = os.path.join(FIXTURES, "layout")
GOLDEN_DIR = os.path.join(FIXTURES, "golden")


def fixture_path(*parts):
    return os.path.join(FIXTURES, *parts)


def read_text(path):
    with open(path, encoding="utf-8") as f:
        return f.read()


def sol_files(directory):
    return sorted(name for name in os.listdir(directory) if name.endswith(".sol"))


def load_model(name):
    path = os.path.join(MODELS_DIR, name)
    return parse_model(read_text(path), file=path)


def load_unit(path):
    return parse_solidity(read_text(path), file=path)


@pytest.fixture
def dex_path():
    return os.path.join(MODELS_DIR, "dex.abcde")


@pytest.fixture
def dao_path():
    return os.path.join(MODELS_DIR, "dao.abcde")


@pytest.fixture
def dex_model():
    return load_model("dex.abcde")


@pytest.fixture
def dao_model():
    return load_model("dao.abcde")
