"""Scenario fixtures, end-to-end driver, and the metrics pipeline."""

from .metrics import (
    ANCILLARY_FIELDS,
    CaseResult,
    METRICS_SCHEMA,
    ancillary_accuracy,
    build_metrics,
    component_concordance,
    confusion_metrics,
    likert_summary,
    percent,
    render_metrics_table,
    timing_stats,
    total_score_deltas,
)
from .runner import (
    CaseRunError,
    build_case_service,
    drive_scenario,
    judge_case,
    run_case,
    run_suite,
)
from .scenarios import (
    SCENARIO_SCHEMA,
    Scenario,
    ScenarioError,
    findings_from_dict,
    load_scenarios,
    load_survey,
    parse_scenario,
)

__all__ = [
    "ANCILLARY_FIELDS",
    "CaseResult",
    "CaseRunError",
    "METRICS_SCHEMA",
    "SCENARIO_SCHEMA",
    "Scenario",
    "ScenarioError",
    "ancillary_accuracy",
    "build_case_service",
    "build_metrics",
    "component_concordance",
    "confusion_metrics",
    "drive_scenario",
    "findings_from_dict",
    "judge_case",
    "likert_summary",
    "load_scenarios",
    "load_survey",
    "parse_scenario",
    "percent",
    "render_metrics_table",
    "run_case",
    "run_suite",
    "timing_stats",
    "total_score_deltas",
]
