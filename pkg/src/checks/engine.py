import logging
from typing import Callable, Dict, Iterator, List

from src.checks import queries as q
from src.checks.catalog import Phase, rules_for
from src.checks.config import LintConfig
from src.checks.diagnostics import Diagnostic, source_order
from src.solidity import ast

logger = logging.getLogger(__name__)


class AnalysisContext:
    """Per-unit state shared by the rules of one run"""

    def __init__(self, unit: ast.SourceUnit):
        self.unit = unit
        self.scopes = [q.ContractScope(unit, contract) for contract in unit.contracts]
        self.type_names = {c.name for c in unit.contracts}

    def bodies(self) -> Iterator[tuple]:
        """(scope, callable, type environment) for every function or modifier body"""
        for scope in self.scopes:
            for callable_ in q.callables(scope.contract):
                yield scope, callable_, q.TypeEnv(scope, callable_)


Check = Callable[[AnalysisContext], Iterator[Diagnostic]]


def run_checks(
    unit: ast.SourceUnit, checks: Dict[str, Check], phase: Phase, config: LintConfig
) -> List[Diagnostic]:
    """Run the automated ``checks`` of ``phase`` plus its manual items.

    Findings silenced by an ``abcde:allow`` comment are dropped, the config's
    severity overrides applied and the result sorted by source position.
    """
    version = unit.pragma.version if unit.pragma is not None else None
    ctx = AnalysisContext(unit)
    found: List[Diagnostic] = []
    for rule in rules_for(phase):
        if not config.is_enabled(rule.rule_id) or not rule.applies_to(version):
            continue
        if rule.is_manual:
            found.append(rule.diagnostic(rule.title))
            continue
        for diag in checks[rule.rule_id](ctx):
            if unit.is_suppressed(diag.rule_id, diag.span):
                logger.debug(f"{diag.rule_id} suppressed at {diag.span}")
                continue
            found.append(diag)
    unique = list(dict.fromkeys(config.apply(found)))
    return sorted(unique, key=source_order)
