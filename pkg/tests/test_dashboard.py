import json

from src.checks.catalog import Phase
from src.checks.lint import lint
from src.exporters.json_exporter import JsonExporter
from src.report.checklist import REPRODUCIBLE_TIMESTAMP, build_report
from src.streamlit.app import findings_frame, load_report, rows_frame
from tests.conftest import VULNERABLE_DIR, load_unit


def _document():
    unit = load_unit(f"{VULNERABLE_DIR}/txorigin.sol")
    report = build_report(Phase.CODING, lint(unit), generated_at=REPRODUCIBLE_TIMESTAMP)
    return JsonExporter().report_document(report)


def test_rows_frame():
    frame = rows_frame(_document())
    assert len(frame) == 13
    assert frame.loc[frame["row"] == "tx.origin", "status"].item() == "findings"
    assert frame.loc[frame["row"] == "tx.origin", "rules"].item() == "CL-TXORIGIN"


def test_findings_frame():
    frame = findings_frame(_document())
    assert set(frame["rule_id"]) == {"CL-TXORIGIN", "CL-FIXWARN", "CL-COVERAGE"}
    row = frame[frame["rule_id"] == "CL-TXORIGIN"].iloc[0]
    assert row["severity"] == "error"
    assert "txorigin.sol:12:" in row["location"]
    assert row["title"]


def test_empty_document():
    assert rows_frame({}).empty
    assert findings_frame({}).empty


def test_load_report(tmp_path):
    path = tmp_path / "report.json"
    path.write_text(json.dumps(_document()), encoding="utf-8")
    assert load_report(str(path))["phase"] == "coding"
    with open(path, encoding="utf-8") as f:
        assert load_report(f)["phase"] == "coding"
