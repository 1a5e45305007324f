import os

import pytest

from src.checks.diagnostics import Severity
from src.model.errors import ConfigError
from src.utils.config import AbcdeConfig, load_config, parse_jobs

FULL = """
[lint]
disabled_rules = CL-DIV, CL-RAWADDR
fail_level = warning
severity.CL-TIMESTAMP = warning

[gas]
enabled_rules = GA-PACK, GA-INIT

[scaffold]
solidity_version = "0.6.12"
one_file_per_contract = false
license_header = SPDX-License-Identifier: MIT

[report]
jobs = 4
"""


def _load(tmp_path, text):
    path = tmp_path / "abcde.toml"
    path.write_text(text, encoding="utf-8")
    return load_config(str(path))


def test_full_config(tmp_path):
    config = _load(tmp_path, FULL)
    assert config.lint.disabled_rules == frozenset({"CL-DIV", "CL-RAWADDR"})
    assert config.lint.fail_level is Severity.WARNING
    assert config.lint.severity_overrides == {"CL-TIMESTAMP": Severity.WARNING}
    assert not config.lint.is_enabled("CL-DIV")
    assert config.gas.is_enabled("GA-PACK")
    assert not config.gas.is_enabled("GA-ARRAY")
    assert config.scaffold.solidity_version == (0, 6, 12)
    assert not config.scaffold.one_file_per_contract
    assert config.scaffold.license_header == "SPDX-License-Identifier: MIT"
    assert config.jobs == 4


def test_empty_file_gives_defaults(tmp_path):
    assert _load(tmp_path, "") == AbcdeConfig()


def test_missing_default_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_config() == AbcdeConfig()


def test_default_file_in_working_directory(tmp_path, monkeypatch):
    (tmp_path / "abcde.toml").write_text("[report]\njobs = 2\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    assert load_config().jobs == 2


def test_explicit_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "nowhere.toml"))


@pytest.mark.parametrize("text", [
    "[unknown]\n",
    "[lint]\ncolour = red\n",
    "[lint]\nenabled_rules = GA-PACK\n",
    "[gas]\ndisabled_rules = CL-DIV\n",
    "[lint]\nseverity.CL-DIV = fatal\n",
    "[lint]\nfail_level = manual\n",
    "[scaffold]\nsolidity_version = 0.5\n",
    "[scaffold]\none_file_per_contract = maybe\n",
    "[scaffold]\npragma = 0.5.16\n",
    "[report]\njobs = many\n",
    "[report]\nthreads = 2\n",
    "not an ini file",
])
def test_invalid_config(tmp_path, text):
    with pytest.raises(ConfigError):
        _load(tmp_path, text)


def test_parse_jobs():
    assert parse_jobs("3") == 3
    for text in ("0", "-1", "two"):
        with pytest.raises(ConfigError):
            parse_jobs(text)


def test_sample_config_loads():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    config = load_config(os.path.join(root, "config", "abcde.toml"))
    assert not config.lint.is_enabled("CL-RAWADDR")
    assert config.scaffold.solidity_version == (0, 5, 16)
    assert config.jobs == 4
