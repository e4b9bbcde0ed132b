"""Operator command line.

Subcommands:
    serve           run the gateway (env-configured)
    run-suite       run all bundled or custom scenarios, write metrics.json
    run-case        run one scenario, print its report JSON
    metrics         print the metrics table from a results directory
    export-report   print the persisted report for a session

Exit codes: 0 success, 2 any case error, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

EX_OK = 0
EX_CASE_ERROR = 2
EX_USAGE = 64


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voicetriage",
        description="Voice-guided stroke assessment service and simulation harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the gateway service")
    serve.add_argument("--listen", help="host:port (default VOICE_LISTEN_ADDR)")

    suite = sub.add_parser("run-suite", help="run every scenario and write metrics")
    suite.add_argument("--fixtures", help="scenario fixtures directory (bundled set by default)")
    suite.add_argument("--out", required=True, help="output directory")

    case = sub.add_parser("run-case", help="run one scenario and print its report")
    case.add_argument("scenario_id")
    case.add_argument("--fixtures", help="scenario fixtures directory")
    case.add_argument("--out", help="write the report here as well")
    case.add_argument(
        "--dump-wire", help="write the captured server message log to this file"
    )

    metrics = sub.add_parser("metrics", help="print the metrics table for a results dir")
    metrics.add_argument("--results", required=True, help="directory holding metrics.json")

    export = sub.add_parser("export-report", help="print a persisted session report")
    export.add_argument("session_id")
    export.add_argument("--data-dir", required=True, help="session store root")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help; anything else is a usage error.
        return EX_OK if exc.code == 0 else EX_USAGE

    if args.command == "serve":
        from .gateway import serve

        serve(listen_addr=args.listen)
        return EX_OK

    if args.command == "run-suite":
        return _run_suite(args)
    if args.command == "run-case":
        return _run_case(args)
    if args.command == "metrics":
        return _metrics(args)
    if args.command == "export-report":
        return _export_report(args)
    return EX_USAGE


def _run_suite(args: argparse.Namespace) -> int:
    from .harness import render_metrics_table, run_suite

    fixtures = Path(args.fixtures) if args.fixtures else None
    out_dir = Path(args.out)
    try:
        results, metrics = run_suite(out_dir, fixtures_dir=fixtures)
    except Exception as exc:  # noqa: BLE001 - CLI surface
        print(f"suite error: {exc}", file=sys.stderr)
        return EX_CASE_ERROR
    print(render_metrics_table(metrics))
    print(f"\nwrote {out_dir / 'metrics.json'}")
    errored = [r for r in results if r.errored]
    for r in errored:
        print(f"case error: {r.scenario_id}: {r.error}", file=sys.stderr)
    return EX_CASE_ERROR if errored else EX_OK


def _run_case(args: argparse.Namespace) -> int:
    import tempfile

    from .harness import drive_scenario, load_scenarios

    fixtures = Path(args.fixtures) if args.fixtures else None
    scenarios = {s.scenario_id: s for s in load_scenarios(fixtures)}
    scenario = scenarios.get(args.scenario_id)
    if scenario is None:
        print(
            f"unknown scenario {args.scenario_id!r}; have: {sorted(scenarios)}",
            file=sys.stderr,
        )
        return EX_USAGE
    wire: list[dict] = []
    try:
        report = drive_scenario(
            scenario,
            data_dir=Path(tempfile.mkdtemp(prefix="voicetriage-case-")),
            collect_wire=wire,
        )
    except Exception as exc:  # noqa: BLE001 - CLI surface
        print(f"case error: {exc}", file=sys.stderr)
        return EX_CASE_ERROR
    report_json = json.dumps(report, ensure_ascii=False, indent=2)
    print(report_json)
    if args.out:
        Path(args.out).write_text(report_json + "\n", encoding="utf-8")
    if args.dump_wire:
        Path(args.dump_wire).write_text(
            json.dumps(wire, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    return EX_OK


def _metrics(args: argparse.Namespace) -> int:
    from .harness import render_metrics_table

    metrics_path = Path(args.results) / "metrics.json"
    if not metrics_path.exists():
        print(f"no metrics.json under {args.results}", file=sys.stderr)
        return EX_USAGE
    doc = json.loads(metrics_path.read_text("utf-8"))
    print(render_metrics_table(doc))
    return EX_OK


def _export_report(args: argparse.Namespace) -> int:
    from .gateway import SessionNotFoundError, SessionStore

    store = SessionStore(Path(args.data_dir))
    try:
        report = store.load_report(args.session_id)
    except SessionNotFoundError:
        print(f"unknown session {args.session_id!r}", file=sys.stderr)
        return EX_USAGE
    sys.stdout.write(report.decode("utf-8"))
    return EX_OK


if __name__ == "__main__":
    raise SystemExit(main())
