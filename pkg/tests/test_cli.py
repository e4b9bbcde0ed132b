"""CLI surface: subcommands, outputs, exit codes."""

import json
from importlib import resources

from voicetriage.cli import EX_CASE_ERROR, EX_OK, EX_USAGE, main


def test_run_case_prints_report(capsys):
    assert main(["run-case", "table1"]) == EX_OK
    out = capsys.readouterr().out
    report = json.loads(out)
    assert report["scores"]["total"] == 6
    assert report["classification"] == {"stroke_likely": True, "lvo_likely": True}


def test_run_case_unknown_scenario(capsys):
    assert main(["run-case", "case99"]) == EX_USAGE


def test_run_suite_writes_outputs(tmp_path, capsys):
    rc = main(["run-suite", "--out", str(tmp_path / "results")])
    assert rc == EX_OK
    out = capsys.readouterr().out
    assert "component concordance" in out
    metrics = json.loads((tmp_path / "results" / "metrics.json").read_text())
    assert metrics["schema"] == "voice-metrics/1"
    reports = sorted((tmp_path / "results" / "reports").glob("*.report.json"))
    assert len(reports) == 10


def test_metrics_command_renders_table(tmp_path, capsys):
    main(["run-suite", "--out", str(tmp_path / "results")])
    capsys.readouterr()
    assert main(["metrics", "--results", str(tmp_path / "results")]) == EX_OK
    out = capsys.readouterr().out
    assert "stroke sens 86%" in out
    assert "lvo    sens 75%" in out


def test_export_report(tmp_path, capsys):
    main(["run-suite", "--out", str(tmp_path / "results")])
    capsys.readouterr()
    rc = main(
        ["export-report", "s-table1", "--data-dir", str(tmp_path / "results" / "sessions")]
    )
    assert rc == EX_OK
    report = json.loads(capsys.readouterr().out)
    assert report["session_id"] == "s-table1"


def test_export_report_unknown_session(tmp_path):
    (tmp_path / "empty").mkdir()
    assert main(["export-report", "ghost", "--data-dir", str(tmp_path / "empty")]) == EX_USAGE


def test_run_suite_case_error_exits_two(tmp_path, capsys):
    """A fixture whose run cannot finish marks the case errored and the
    suite exits 2 (the healthy cases still produce reports)."""
    fixtures = tmp_path / "fixtures"
    fixtures.mkdir()
    good = json.loads(
        resources.files("voicetriage.data.scenarios")
        .joinpath("case02_posterior.json")
        .read_text("utf-8")
    )
    broken = json.loads(
        resources.files("voicetriage.data.scenarios")
        .joinpath("table1.json")
        .read_text("utf-8")
    )
    broken["scenario_id"] = "table1_broken"
    broken["clarification_answers"] = {}  # the driver cannot answer
    (fixtures / "case02_posterior.json").write_text(json.dumps(good))
    (fixtures / "table1_broken.json").write_text(json.dumps(broken))

    rc = main(["run-suite", "--fixtures", str(fixtures), "--out", str(tmp_path / "out")])
    assert rc == EX_CASE_ERROR
    err = capsys.readouterr().err
    assert "table1_broken" in err
    metrics = json.loads((tmp_path / "out" / "metrics.json").read_text())
    assert metrics["errored_cases"] == ["table1_broken"]
    assert (tmp_path / "out" / "reports" / "case02_posterior.report.json").exists()


def test_unknown_flag_is_a_usage_error(capsys):
    assert main(["run-suite", "--bogus"]) == EX_USAGE


def test_unknown_command_is_a_usage_error(capsys):
    assert main(["frobnicate"]) == EX_USAGE
