"""Per-file analysis fanned out to a worker pool, merged in a fixed order."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from src.checks.diagnostics import Diagnostic, source_order
from src.model.errors import SourceSyntaxError
from src.model.spans import ParseError
from src.solidity import ast
from src.solidity.parser import parse_solidity

logger = logging.getLogger(__name__)

Analysis = Callable[[ast.SourceUnit], List[Diagnostic]]


@dataclass(frozen=True)
class FileResult:
    path: str
    diagnostics: Tuple[Diagnostic, ...] = ()
    parse_errors: Tuple[ParseError, ...] = ()
    io_error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.parse_errors and self.io_error is None


def read_bytes(path: str) -> bytes:
    with open(path, "rb") as f:
        return f.read()


def analyze_file(path: str, analyses: Sequence[Analysis]) -> FileResult:
    """Parse one Solidity file and run every analysis on it"""
    try:
        unit = parse_solidity(read_bytes(path), file=path)
    except OSError as e:
        logger.error(f"Cannot read {path}: {str(e)}")
        return FileResult(path, io_error=str(e))
    except SourceSyntaxError as e:
        logger.info(f"{path}: {len(e.errors)} parse error(s)")
        return FileResult(path, parse_errors=tuple(e.errors))
    found: List[Diagnostic] = []
    for analysis in analyses:
        found += analysis(unit)
    return FileResult(path, diagnostics=tuple(found))


def analyze_files(paths: Sequence[str], analyses: Sequence[Analysis], jobs: int = 1) -> List[FileResult]:
    """Analyze ``paths``; results come back in input order whatever ``jobs`` is"""
    if jobs <= 1 or len(paths) <= 1:
        return [analyze_file(path, analyses) for path in paths]
    logger.debug(f"analyzing {len(paths)} file(s) with {jobs} worker(s)")
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda path: analyze_file(path, analyses), paths))


def merge(results: Iterable[FileResult]) -> List[Diagnostic]:
    """All findings of ``results``, manual items deduplicated, in source order"""
    found = [d for result in results for d in result.diagnostics]
    return sorted(dict.fromkeys(found), key=source_order)
