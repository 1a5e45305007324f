import json
import os
import logging
from typing import Any, Dict, List, Optional

import pandas as pd

from src.report.checklist import ChecklistReport


class JsonExporter:
    """Exports checklist reports and storage layouts as JSON for CI consumption"""

    def __init__(self, output_dir: Optional[str] = None):
        """
        Initialize the exporter

        Args:
            output_dir: Directory that relative file names are resolved against;
                the current directory when omitted
        """
        self.output_dir = output_dir
        self.logger = logging.getLogger(__name__)

        if output_dir:
            try:
                os.makedirs(output_dir, exist_ok=True)
                self.logger.info(f"Output directory initialized at: {output_dir}")
            except OSError as e:
                self.logger.error(
                    f"Failed to create output directory '{output_dir}': {str(e)}"
                )
                raise RuntimeError(f"Could not initialize output directory: {str(e)}")

    @staticmethod
    def _frame_records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
        """Convert a summary frame to plain JSON records (numpy scalars become ints)"""
        records = []
        for row in frame.to_dict(orient="records"):
            records.append({
                key: value.item() if hasattr(value, "item") else value
                for key, value in row.items()
            })
        return records

    def report_document(self, report: ChecklistReport) -> Dict[str, Any]:
        """
        Build the JSON document of a report

        Args:
            report: The checklist report

        Returns:
            Dictionary following the published report schema
        """
        document = report.to_dict()
        rows = report.summary_frame()
        document["metadata"] = {
            "row_count": len(rows),
            "rows_with_findings": int((rows["findings"] > 0).sum()),
            "finding_count": int(rows["findings"].sum()) + sum(
                1 for d in report.extra if d.severity.value != "manual"
            ),
            "rule_counts": self._frame_records(report.rule_frame()),
        }
        return document

    def render(self, document: Any) -> str:
        """Serialize ``document`` deterministically (2-space indent, LF, UTF-8 text)"""
        return json.dumps(document, ensure_ascii=False, indent=2) + "\n"

    def export(self, document: Any, filename: str) -> str:
        """
        Write a JSON document to a file

        Args:
            document: JSON-serializable data
            filename: Target file, relative to the output directory if one was given

        Returns:
            Path to the exported file

        Raises:
            RuntimeError: If export fails
        """
        output_path = os.path.join(self.output_dir, filename) if self.output_dir else filename
        self.logger.info(f"Preparing to export to: {output_path}")
        try:
            directory = os.path.dirname(output_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(output_path, "w", encoding="utf-8", newline="\n") as f:
                f.write(self.render(document))
            self.logger.info(f"Successfully exported to {output_path}")
            return output_path
        except (IOError, OSError, TypeError) as e:
            error_msg = f"Failed to write JSON file: {str(e)}"
            self.logger.error(error_msg)
            raise RuntimeError(error_msg)

    def export_report(self, report: ChecklistReport, filename: str) -> str:
        return self.export(self.report_document(report), filename)

    def export_layouts(self, layouts: List[Dict[str, Any]], filename: str) -> str:
        """Write the storage-layout documents of several contracts as one JSON array"""
        if not isinstance(layouts, list):
            error_msg = "Layouts must be a list of documents"
            self.logger.error(error_msg)
            raise ValueError(error_msg)
        return self.export(layouts, filename)
