"""Command-line interface of the abcde toolchain.

Exit codes: 0 when nothing reaches the fail level, 1 when a finding does, 2 for
parse, usage, configuration and file errors.
"""
import argparse
import logging
import os
import sys
from functools import partial
from typing import List, Optional, Sequence, Tuple

from src import __version__
from src.checks.catalog import DESIGN_ROWS, RULES, Phase
from src.checks.config import LintConfig, parse_fail_level
from src.checks.design import check_design
from src.checks.diagnostics import Diagnostic, Severity
from src.checks.gas import analyze_gas
from src.checks.lint import lint
from src.checks.packing import layout_document
from src.dsl.formatter import format_model
from src.dsl.parser import parse_model
from src.exporters.console import ConsoleExporter
from src.exporters.json_exporter import JsonExporter
from src.exporters.markdown import render_markdown
from src.generators.diagrams import class_diagram, sequence_diagram
from src.generators.scaffold import generate_solidity
from src.model.errors import AbcdeError, ConfigError, SourceSyntaxError
from src.model.types import SystemModel
from src.model.validation import validate_model
from src.report.checklist import build_report, timestamp
from src.report.pipeline import FileResult, analyze_files, merge, read_bytes
from src.solidity import ast
from src.solidity.parser import parse_solidity
from src.utils.config import AbcdeConfig, load_config, parse_jobs
from src.utils.logging_config import LEVELS, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FINDINGS, EXIT_ERROR = 0, 1, 2
SOLIDITY_SUFFIX = ".sol"


class UsageError(AbcdeError):
    """Invalid combination of arguments or inputs"""


def _common_options() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=argparse.SUPPRESS, help='Path to abcde.toml')
    common.add_argument('--fail-level', default=argparse.SUPPRESS, choices=['error', 'warning', 'info'],
                        help='Lowest severity that makes the run fail (default: error)')
    common.add_argument('--no-color', action='store_true', default=argparse.SUPPRESS,
                        help='Disable ANSI colours')
    common.add_argument('--jobs', default=argparse.SUPPRESS, help='Worker count for per-file analysis')
    common.add_argument('--log-level', default=argparse.SUPPRESS, choices=LEVELS, help='Logging level (default: WARNING)')
    common.add_argument('--log-file', default=argparse.SUPPRESS, help='Also write log records to this file')
    return common


def build_parser() -> argparse.ArgumentParser:
    """Parse command-line arguments"""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='abcde', parents=[common],
        description='Design and audit toolchain for smart-contract systems',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('parse', parents=[common], help='Parse a model or Solidity file and print its outline')
    p.add_argument('file')

    p = sub.add_parser('check-design', parents=[common], help='Validate a model and apply the design checklist')
    p.add_argument('model')

    p = sub.add_parser('check-code', parents=[common], help='Apply the coding checklist to Solidity files')
    p.add_argument('files', nargs='+')

    p = sub.add_parser('gas', parents=[common], help='Apply the GAS-saving patterns to Solidity files')
    p.add_argument('files', nargs='+')
    p.add_argument('--layout-json', help='Write the storage layout of every contract to this JSON file')

    p = sub.add_parser('diagram', parents=[common], help='Emit a class or sequence diagram of a model')
    p.add_argument('kind', choices=['class', 'sequence'])
    p.add_argument('model')
    p.add_argument('--scenario', help='Scenario to draw (required when the model has several)')
    p.add_argument('-o', '--output', help='Output .adt file (default: standard output)')

    p = sub.add_parser('scaffold', parents=[common], help='Generate Solidity skeletons from a model')
    p.add_argument('model')
    p.add_argument('-o', '--output', required=True, help='Output directory')

    p = sub.add_parser('report', parents=[common], help='Render the design or coding checklist report')
    p.add_argument('phase', choices=['design', 'coding'])
    p.add_argument('inputs', nargs='+')
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument('--json', action='store_true', help='Emit the JSON report')
    fmt.add_argument('--markdown', action='store_true', help='Emit the Markdown report')
    p.add_argument('-o', '--output', help='Write the report to this file instead of standard output')
    p.add_argument('--reproducible', action='store_true', help='Pin the report timestamp')

    p = sub.add_parser('rules', parents=[common], help='List the rule catalog')
    p.add_argument('--phase', choices=[phase.value for phase in Phase])
    return parser


class _Run:
    """Settings and helpers shared by the subcommands of one invocation"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: AbcdeConfig = load_config(getattr(args, 'config', None))
        self.cli_fail_level: Optional[Severity] = None
        if getattr(args, 'fail_level', None):
            self.cli_fail_level = parse_fail_level(args.fail_level)
        jobs = getattr(args, 'jobs', None)
        self.jobs = parse_jobs(jobs) if jobs is not None else self.config.jobs
        color = not getattr(args, 'no_color', False) and sys.stdout.isatty()
        self.console = ConsoleExporter(color=color)

    def fail_level(self, config: LintConfig) -> Severity:
        return self.cli_fail_level or config.fail_level

    @staticmethod
    def out(text: str) -> None:
        sys.stdout.write(text)

    def exit_code(self, diagnostics: Sequence[Diagnostic], level: Severity) -> int:
        return EXIT_FINDINGS if any(d.severity.meets(level) for d in diagnostics) else EXIT_OK

    # inputs ------------------------------------------------------------

    def load_model(self, path: str) -> SystemModel:
        return parse_model(read_bytes(path), file=path)

    def valid_model(self, path: str) -> Tuple[Optional[SystemModel], List[Diagnostic]]:
        """The parsed model, or None with its validation findings"""
        model = self.load_model(path)
        problems = validate_model(model)
        if problems:
            logger.warning(f"{path}: {len(problems)} model error(s)")
            return None, problems
        return model, []

    def analyze(self, paths: Sequence[str], analyses) -> Tuple[List[Diagnostic], bool]:
        results: List[FileResult] = analyze_files(paths, analyses, jobs=self.jobs)
        ok = True
        for result in results:
            if result.parse_errors:
                sys.stderr.write(self.console.parse_errors(result.parse_errors))
                ok = False
            if result.io_error is not None:
                sys.stderr.write(f"{result.path}: cannot read: {result.io_error}\n")
                ok = False
        return merge(results), ok

    # subcommands -------------------------------------------------------

    def cmd_parse(self) -> int:
        path = self.args.file
        if path.endswith(SOLIDITY_SUFFIX):
            unit = parse_solidity(read_bytes(path), file=path)
            self.out(_outline(unit))
        else:
            self.out(format_model(self.load_model(path)))
        return EXIT_OK

    def cmd_check_design(self) -> int:
        model, problems = self.valid_model(self.args.model)
        diagnostics = problems if model is None else check_design(model)
        self.out(self.console.diagnostics(diagnostics))
        return self.exit_code(diagnostics, self.fail_level(self.config.lint))

    def cmd_check_code(self) -> int:
        diagnostics, ok = self.analyze(self.args.files, [partial(lint, config=self.config.lint)])
        self.out(self.console.diagnostics(diagnostics))
        if not ok:
            return EXIT_ERROR
        return self.exit_code(diagnostics, self.fail_level(self.config.lint))

    def cmd_gas(self) -> int:
        diagnostics, ok = self.analyze(self.args.files, [partial(analyze_gas, config=self.config.gas)])
        self.out(self.console.diagnostics(diagnostics))
        if not ok:
            return EXIT_ERROR
        if self.args.layout_json:
            JsonExporter().export_layouts(self._layouts(self.args.files), self.args.layout_json)
        return self.exit_code(diagnostics, self.fail_level(self.config.gas))

    def _layouts(self, paths: Sequence[str]) -> List[dict]:
        documents = []
        for path in paths:
            unit = parse_solidity(read_bytes(path), file=path)
            for contract in unit.contracts:
                if contract.kind is not ast.ContractDefKind.CONTRACT:
                    continue
                try:
                    document = layout_document(contract, unit)
                except AbcdeError as e:
                    logger.warning(f"{path}: no storage layout for {contract.name}: {e}")
                    continue
                documents.append({"file": path, **document})
        return documents

    def cmd_diagram(self) -> int:
        model, problems = self.valid_model(self.args.model)
        if model is None:
            self.out(self.console.diagnostics(problems))
            return EXIT_FINDINGS
        if self.args.kind == 'class':
            diagram = class_diagram(model)
        else:
            diagram = sequence_diagram(self._scenario(model))
        if self.args.output:
            diagram.write(self.args.output)
        else:
            self.out(diagram.text)
        return EXIT_OK

    def _scenario(self, model: SystemModel):
        name = self.args.scenario
        if name is None:
            if len(model.scenarios) != 1:
                raise UsageError(f"the model has {len(model.scenarios)} scenarios; choose one with --scenario")
            return model.scenarios[0]
        scenario = model.scenario(name)
        if scenario is None:
            raise UsageError(f"no scenario named '{name}' in {self.args.model}")
        return scenario

    def cmd_scaffold(self) -> int:
        model, problems = self.valid_model(self.args.model)
        if model is None:
            self.out(self.console.diagnostics(problems))
            return EXIT_FINDINGS
        files = generate_solidity(model, self.config.scaffold)
        try:
            os.makedirs(self.args.output, exist_ok=True)
            for name, text in files.items():
                path = os.path.join(self.args.output, name)
                with open(path, "w", encoding="utf-8", newline="\n") as f:
                    f.write(text)
                self.out(f"{path}\n")
        except OSError as e:
            logger.error(f"Failed to write scaffold: {str(e)}")
            raise RuntimeError(f"Could not write scaffold: {str(e)}")
        return EXIT_OK

    def cmd_report(self) -> int:
        phase = Phase(self.args.phase)
        models = [p for p in self.args.inputs if not p.endswith(SOLIDITY_SUFFIX)]
        sources = [p for p in self.args.inputs if p.endswith(SOLIDITY_SUFFIX)]
        if phase is Phase.CODING and models:
            raise UsageError(f"a coding report takes Solidity sources only, got {', '.join(models)}")

        diagnostics: List[Diagnostic] = []
        for path in models:
            model, problems = self.valid_model(path)
            diagnostics += problems if model is None else check_design(model)
        cross: Tuple[Phase, ...] = ()
        if sources:
            if phase is Phase.CODING:
                analyses = [partial(lint, config=self.config.lint), partial(analyze_gas, config=self.config.gas)]
            else:
                analyses = [partial(lint, config=self.config.lint)]
            found, ok = self.analyze(sources, analyses)
            if not ok:
                return EXIT_ERROR
            if phase is Phase.DESIGN:
                found = [d for d in found if d.checklist_ref in DESIGN_ROWS]
                cross = (Phase.CODING,)
            diagnostics += found
        diagnostics = list(dict.fromkeys(diagnostics))

        report = build_report(
            phase,
            diagnostics,
            cross_phases=cross,
            generated_at=timestamp(self.args.reproducible),
            inputs=self.args.inputs,
        )
        exporter = JsonExporter()
        if self.args.json:
            text = exporter.render(exporter.report_document(report))
        elif self.args.markdown:
            text = render_markdown(report)
        else:
            text = self.console.report(report)
        if self.args.output:
            _write_text(self.args.output, text)
        else:
            self.out(text)
        return self.exit_code(report.diagnostics, self.fail_level(self.config.lint))

    def cmd_rules(self) -> int:
        rules = list(RULES.values())
        if self.args.phase:
            rules = [r for r in rules if r.phase.value == self.args.phase]
        self.out(self.console.rules(rules))
        return EXIT_OK


def _write_text(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"Report written to {path}")


def _outline(unit: ast.SourceUnit) -> str:
    lines = [f"{unit.file}: pragma {unit.pragma.raw if unit.pragma else '(none)'}"]
    for contract in unit.contracts:
        parents = f" is {', '.join(contract.parents)}" if contract.parents else ""
        lines.append(
            f"{contract.kind.value} {contract.name}{parents}: "
            f"{len(contract.state_vars)} state variable(s), {len(contract.functions)} function(s), "
            f"{len(contract.modifiers)} modifier(s), {len(contract.events)} event(s)"
        )
    return "\n".join(lines) + "\n"


COMMANDS = {
    'parse': _Run.cmd_parse,
    'check-design': _Run.cmd_check_design,
    'check-code': _Run.cmd_check_code,
    'gas': _Run.cmd_gas,
    'diagram': _Run.cmd_diagram,
    'scaffold': _Run.cmd_scaffold,
    'report': _Run.cmd_report,
    'rules': _Run.cmd_rules,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command line and return its exit code (0, 1 or 2)"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help/--version and 2 for usage errors
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    setup_logging(getattr(args, 'log_level', 'WARNING'), getattr(args, 'log_file', None))
    try:
        session = _Run(args)
        return COMMANDS[args.command](session)
    except SourceSyntaxError as e:
        logger.error(f"Parsing failed: {str(e)}")
        sys.stderr.write(ConsoleExporter().parse_errors(e.errors))
        return EXIT_ERROR
    except (ConfigError, UsageError) as e:
        logger.error(str(e))
        sys.stderr.write(f"abcde: error: {e}\n")
        return EXIT_ERROR
    except (OSError, RuntimeError) as e:
        logger.error(f"I/O failure: {str(e)}")
        sys.stderr.write(f"abcde: error: {e}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))
