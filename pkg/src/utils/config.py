"""Loading of ``abcde.toml`` (INI syntax, read with configparser).

Example::

    [lint]
    disabled_rules = CL-DIV, CL-RAWADDR
    fail_level = warning
    severity.CL-TIMESTAMP = warning

    [gas]
    enabled_rules = GA-PACK, GA-INIT

    [scaffold]
    solidity_version = 0.5.16
    one_file_per_contract = true

    [report]
    jobs = 4
"""
import configparser
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Optional

from src.checks.catalog import Phase, rule_ids
from src.checks.config import LintConfig, parse_fail_level, parse_rule_list
from src.checks.diagnostics import Severity
from src.generators.scaffold import ScaffoldConfig, parse_version
from src.model.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "abcde.toml"
SEVERITY_PREFIX = "severity."
SCAFFOLD_KEYS = ("solidity_version", "one_file_per_contract", "license_header")
REPORT_KEYS = ("jobs",)


@dataclass(frozen=True)
class AbcdeConfig:
    lint: LintConfig = field(default_factory=LintConfig)
    gas: LintConfig = field(default_factory=LintConfig)
    scaffold: ScaffoldConfig = field(default_factory=ScaffoldConfig)
    jobs: int = 1


def _value(text: str) -> str:
    """Strip TOML-style quotes around a value"""
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    return text


def _rule_section(parser: configparser.ConfigParser, name: str, phase: Phase) -> LintConfig:
    if not parser.has_section(name):
        return LintConfig()
    allowed = rule_ids(phase)
    enabled = None
    disabled = frozenset()
    overrides: Dict[str, Severity] = {}
    fail_level = Severity.ERROR
    for key, raw in parser.items(name):
        value = _value(raw)
        if key == "enabled_rules":
            enabled = parse_rule_list(value)
        elif key == "disabled_rules":
            disabled = parse_rule_list(value)
        elif key == "fail_level":
            fail_level = parse_fail_level(value)
        elif key.startswith(SEVERITY_PREFIX):
            try:
                overrides[key[len(SEVERITY_PREFIX):]] = Severity.parse(value)
            except ValueError as e:
                raise ConfigError(f"[{name}] {key}: {e}") from None
        else:
            raise ConfigError(f"[{name}] unknown key '{key}'")
    named = set(enabled or ()) | set(disabled) | set(overrides)
    foreign = sorted(rule_id for rule_id in named if rule_id not in allowed)
    if foreign:
        raise ConfigError(f"[{name}] rule id(s) not in the {phase.value} catalog: {', '.join(foreign)}")
    return LintConfig(enabled, disabled, overrides, fail_level)


def _scaffold_section(parser: configparser.ConfigParser) -> ScaffoldConfig:
    if not parser.has_section("scaffold"):
        return ScaffoldConfig()
    section = parser["scaffold"]
    unknown = sorted(set(section) - set(SCAFFOLD_KEYS))
    if unknown:
        raise ConfigError(f"[scaffold] unknown key(s): {', '.join(unknown)}")
    version = ScaffoldConfig().solidity_version
    if "solidity_version" in section:
        version = parse_version(_value(section["solidity_version"]))
    try:
        one_file = section.getboolean("one_file_per_contract", fallback=True)
    except ValueError as e:
        raise ConfigError(f"[scaffold] one_file_per_contract: {e}") from None
    header = _value(section.get("license_header", ""))
    return ScaffoldConfig(version, one_file, header)


def _jobs(parser: configparser.ConfigParser) -> int:
    if not parser.has_section("report"):
        return 1
    section = parser["report"]
    unknown = sorted(set(section) - set(REPORT_KEYS))
    if unknown:
        raise ConfigError(f"[report] unknown key(s): {', '.join(unknown)}")
    return parse_jobs(_value(section.get("jobs", "1")))


def parse_jobs(text: str) -> int:
    try:
        jobs = int(text)
    except ValueError:
        raise ConfigError(f"jobs must be a positive integer, got '{text}'") from None
    if jobs < 1:
        raise ConfigError(f"jobs must be a positive integer, got '{text}'")
    return jobs


def load_config(path: Optional[str] = None) -> AbcdeConfig:
    """
    Read the configuration file

    Args:
        path: Explicit file; when omitted ``./abcde.toml`` is used if present

    Returns:
        The parsed configuration, defaults for absent sections

    Raises:
        ConfigError: If the file is missing (explicit path), malformed or names
            unknown rules, severities or keys
    """
    if path is None:
        if not os.path.exists(DEFAULT_CONFIG_FILE):
            return AbcdeConfig()
        path = DEFAULT_CONFIG_FILE
    elif not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")

    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f)
    except (OSError, configparser.Error) as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from None

    known = {"lint", "gas", "scaffold", "report"}
    unknown = sorted(set(parser.sections()) - known)
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(unknown)}")

    config = AbcdeConfig(
        lint=_rule_section(parser, "lint", Phase.CODING),
        gas=_rule_section(parser, "gas", Phase.GAS),
        scaffold=_scaffold_section(parser),
        jobs=_jobs(parser),
    )
    logger.info(f"Configuration loaded from {path}")
    return config
