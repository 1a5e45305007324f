import sys
import os
import json
import pandas as pd
import streamlit as st
import plotly.express as px

# Add the project root to the path so we can import our modules
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "../..")))
from src.checks.catalog import RULES

SEVERITY_ORDER = ["error", "warning", "info", "manual"]


def rows_frame(document):
    """One line per checklist row of a JSON report"""
    return pd.DataFrame(
        [
            {
                "row": row["title"],
                "status": row["status"],
                "findings": row["findings"],
                "rules": ", ".join(row["rule_ids"]),
            }
            for row in document.get("rows", [])
        ],
        columns=["row", "status", "findings", "rules"],
    )


def findings_frame(document):
    """Every diagnostic of a JSON report, row findings and additional ones alike"""
    records = []
    sections = [(row["title"], row["diagnostics"]) for row in document.get("rows", [])]
    sections.append(("additional findings", document.get("additional_findings", [])))
    for title, diagnostics in sections:
        for diag in diagnostics:
            span = diag.get("span") or {}
            location = f"{span['file']}:{span['line']}:{span['column']}" if span else (diag.get("path") or "")
            rule = RULES.get(diag["rule_id"])
            records.append({
                "row": title,
                "rule_id": diag["rule_id"],
                "title": rule.title if rule else "",
                "severity": diag["severity"],
                "location": location,
                "message": diag["message"],
            })
    return pd.DataFrame(records, columns=["row", "rule_id", "title", "severity", "location", "message"])


def load_report(source):
    """Parse a JSON report from an uploaded file or a path"""
    if isinstance(source, str):
        with open(source, encoding="utf-8") as f:
            return json.load(f)
    return json.load(source)


def main():
    st.set_page_config(
        page_title="Security Checklist Report",
        layout="wide"
    )

    st.title("Security Checklist Report")

    # Report selection in sidebar
    st.sidebar.header("Report")
    uploaded = st.sidebar.file_uploader("JSON report (abcde report ... --json)", type=["json"])
    default_path = sys.argv[1] if len(sys.argv) > 1 else ""
    path = st.sidebar.text_input("...or a path on disk", value=default_path)

    source = uploaded or path
    if not source:
        st.info("Load a JSON report produced with `abcde report design|coding ... --json`.")
        return
    try:
        document = load_report(source)
    except (OSError, ValueError) as e:
        st.error(f"Error loading report: {str(e)}")
        return

    rows_df = rows_frame(document)
    findings_df = findings_frame(document)
    st.caption(
        f"{document.get('phase', '?')} phase, generated {document.get('generated_at', '?')} "
        f"by abcde {document.get('tool_version', '?')}"
    )

    # Severity filter in sidebar
    st.sidebar.header("Severity Filter")
    selected = st.sidebar.multiselect(
        "Severities to include:",
        options=SEVERITY_ORDER,
        default=[s for s in SEVERITY_ORDER if s != "manual"]
    )
    df = findings_df[findings_df["severity"].isin(selected)] if selected else findings_df
    st.sidebar.info(f"Showing {len(df)} of {len(findings_df)} diagnostics")

    col1, col2, col3 = st.columns(3)
    col1.metric("Checklist rows", len(rows_df))
    col2.metric("Rows with findings", int((rows_df["findings"] > 0).sum()))
    col3.metric("Rows passed", int((rows_df["status"] == "pass").sum()))

    st.header("Checklist")
    st.dataframe(rows_df, hide_index=True)

    if df.empty:
        st.success("No diagnostics for the selected severities.")
        return

    st.header("Findings by Rule")
    rule_df = df.groupby(["rule_id", "severity"]).size().reset_index(name="count")
    fig1 = px.bar(
        rule_df,
        x="rule_id",
        y="count",
        color="severity",
        category_orders={"severity": SEVERITY_ORDER},
        labels={"rule_id": "Rule", "count": "Diagnostics"},
        title="Diagnostics per Rule"
    )
    st.plotly_chart(fig1)

    st.header("Findings by Severity")
    severity_df = df.groupby("severity").size().reset_index(name="count")
    fig2 = px.pie(
        severity_df,
        values="count",
        names="severity",
        title="Diagnostics by Severity"
    )
    st.plotly_chart(fig2)

    st.header("Diagnostics")
    st.dataframe(df, hide_index=True)


if __name__ == "__main__":
    main()
