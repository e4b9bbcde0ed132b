"""End-to-end scenario driver.

Runs a scenario through the real protocol stack (gateway connection,
engine, scripted backend) exactly the way an operator client would:
text turns, synthetic video uploads at each gate, and clarification
answers from the fixture. Everything is driven off a synthetic clock, so
a run is a pure function of its fixtures.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

from ..agents import AgentTable, load_agent_table
from ..clock import DEFAULT_SYNTHETIC_START, SyntheticClock
from ..gateway import InProcessClient, ServiceConfig, SessionService
from ..scripted import REPROMPT_PREFIX, ScriptedBackend
from .metrics import CaseResult, build_metrics, render_metrics_table
from .scenarios import Scenario, load_scenarios, load_survey

MAX_REPROMPT_RESENDS = 3
SYNTHETIC_VIDEO_BYTES = 4096
SYNTHETIC_VIDEO_DURATION_S = 8.0


class CaseRunError(RuntimeError):
    pass


def build_case_service(
    scenario: Scenario,
    data_dir: Path,
    agent_table: Optional[AgentTable] = None,
) -> SessionService:
    table = agent_table or load_agent_table()
    script = scenario.load_script(table)
    return SessionService(
        ServiceConfig(
            data_dir=data_dir,
            backend_factory=lambda session_id: ScriptedBackend(script),
            agent_table=table,
            clock_factory=lambda: SyntheticClock(DEFAULT_SYNTHETIC_START),
            session_id_factory=lambda: f"s-{scenario.scenario_id}",
        )
    )


def run_case(
    scenario: Scenario,
    service: Optional[SessionService] = None,
    data_dir: Optional[Path] = None,
) -> CaseResult:
    """Drive one scenario to its final report and judge it against the
    ground truth. Protocol failures mark the case errored instead of
    raising, so a suite run always completes."""
    try:
        report = drive_scenario(scenario, service=service, data_dir=data_dir)
    except Exception as exc:  # noqa: BLE001 - errored cases are a result
        return CaseResult(scenario_id=scenario.scenario_id, errored=True, error=str(exc))
    return judge_case(scenario, report)


def drive_scenario(
    scenario: Scenario,
    service: Optional[SessionService] = None,
    data_dir: Optional[Path] = None,
    collect_wire: Optional[list[dict[str, Any]]] = None,
    script=None,
) -> dict[str, Any]:
    """Run the full protocol conversation; returns the parsed report.

    ``collect_wire`` captures every server envelope in order when given
    (used to record logs for client replay tests). ``script`` must match
    whatever the service's backend replays; it defaults to the scenario's
    own faulted script.
    """
    if service is None:
        if data_dir is None:
            raise CaseRunError("run_case needs a service or a data_dir")
        service = build_case_service(scenario, data_dir)

    if script is None:
        script = scenario.load_script()
    user_turns = [step.user_text for step in script.steps]
    client = InProcessClient(service)

    replies = client.send("session.start", {"proto": "voice/1", "mode": "text"})
    if collect_wire is not None:
        collect_wire.extend(replies)
    if not replies or replies[0]["type"] != "session.accepted":
        raise CaseRunError(f"session not accepted: {replies}")
    session_id = replies[0]["payload"]["session_id"]

    queue = list(user_turns)
    report: Optional[dict[str, Any]] = None
    resends = 0
    last_sent: Optional[str] = None
    pending = replies
    for _ in range(40 * (len(user_turns) + 4)):
        action = _next_action(pending)
        if action[0] == "report":
            report = json.loads(action[1])
            break
        if action[0] == "error":
            raise CaseRunError(f"protocol error: {action[1]}")
        if action[0] == "video":
            component = action[1]
            video_id = service.upload_video(
                session_id,
                component,
                _synthetic_video(component),
                "video/webm",
                SYNTHETIC_VIDEO_DURATION_S,
            )
            pending = client.send("video.complete", {"video_id": video_id}, session_id)
        elif action[0] == "clarify":
            field_path = action[1]
            answer = scenario.clarification_answers.get(field_path)
            if answer is None:
                raise CaseRunError(f"no clarification answer for {field_path}")
            pending = client.send("text.turn", {"text": answer}, session_id)
        elif action[0] == "reprompt":
            # A garbled transcription holds the script cursor; say it again.
            if last_sent is None or resends >= MAX_REPROMPT_RESENDS:
                raise CaseRunError("reprompt loop never converged")
            resends += 1
            pending = client.send("text.turn", {"text": last_sent}, session_id)
        else:  # next scripted turn
            if not queue:
                raise CaseRunError("script exhausted without a final report")
            resends = 0
            last_sent = queue.pop(0)
            pending = client.send("text.turn", {"text": last_sent}, session_id)
        if collect_wire is not None:
            collect_wire.extend(pending)

    if report is None:
        raise CaseRunError("conversation ended without report.final")
    return report


def _next_action(messages: list[dict[str, Any]]) -> tuple[str, Any]:
    """Decide the driver's next move from the latest server messages."""
    for msg in messages:
        if msg["type"] == "report.final":
            return "report", msg["payload"]["report_json"]
        if msg["type"] == "error":
            return "error", msg["payload"]
        if msg["type"] == "video.request":
            return "video", msg["payload"]["component"]
    for msg in messages:
        if (
            msg["type"] == "state.phase"
            and msg["payload"].get("status") == "awaiting_clarification"
        ):
            return "clarify", msg["payload"].get("detail")
    for msg in messages:
        if msg["type"] == "assistant.text" and msg["payload"]["text"].startswith(
            REPROMPT_PREFIX
        ):
            return "reprompt", None
    return "turn", None


def _synthetic_video(component: str) -> bytes:
    header = f"synthetic-webm:{component}:".encode()
    return header + b"\x00" * (SYNTHETIC_VIDEO_BYTES - len(header))


def judge_case(scenario: Scenario, report: dict[str, Any]) -> CaseResult:
    """Field-by-field comparison of a report against the ground truth."""
    gt = scenario.ground_truth
    gt_scores: dict[str, int] = dict(gt["component_scores"])
    ai_scores_raw = report["scores"]
    ai_scores = {k: ai_scores_raw[k] for k in gt_scores}
    component_match = {k: ai_scores[k] == gt_scores[k] for k in gt_scores}

    incomplete = bool(ai_scores_raw["incomplete"])
    ai_total = ai_scores_raw["partial_total"] if incomplete else ai_scores_raw["total"]
    total_delta = int(ai_total) - int(gt["total"])

    gt_demo = gt.get("demographics", {})
    gt_times = gt.get("times", {})
    gt_anc = gt.get("ancillary", {})
    anc = report["ancillary"]
    glucose_expected = gt_anc.get("glucose_mg_dl")
    glucose_unmeasurable = bool(gt_anc.get("glucose_unmeasurable", False))
    ancillary_match = {
        "sex": report["demographics"]["sex"] == gt_demo.get("sex"),
        "age": report["demographics"]["age"] == gt_demo.get("age"),
        "last_known_well": report["times"]["last_known_well"]
        == gt_times.get("last_known_well"),
        "symptom_onset": report["times"]["symptom_onset"]
        == gt_times.get("symptom_onset"),
        "anticoagulants": sorted(anc["anticoagulants"] or [])
        == sorted(gt_anc.get("anticoagulants", [])),
        "prior_stroke": anc["prior_stroke"] == gt_anc.get("prior_stroke"),
        "glucose": (
            anc["glucose_mg_dl"] == glucose_expected
            and anc["glucose_unmeasurable"] == glucose_unmeasurable
        ),
    }

    return CaseResult(
        scenario_id=scenario.scenario_id,
        component_match=component_match,
        ai_scores=ai_scores,
        gt_scores=gt_scores,
        total_delta=total_delta,
        ai_total_incomplete=incomplete,
        stroke_pred=bool(report["classification"]["stroke_likely"]),
        stroke_true=scenario.stroke_true,
        lvo_pred=bool(report["classification"]["lvo_likely"]),
        lvo_true=scenario.lvo_true,
        ancillary_match=ancillary_match,
        duration_s=float(report["session"]["duration_s"]),
        user_confidence=scenario.user_confidence,
    )


def run_suite(
    out_dir: Path,
    fixtures_dir: Optional[Path] = None,
    agent_table: Optional[AgentTable] = None,
) -> tuple[list[CaseResult], dict[str, Any]]:
    """Run every scenario, write per-case reports and ``metrics.json``."""
    out_dir = Path(out_dir)
    reports_dir = out_dir / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)
    scenarios = load_scenarios(fixtures_dir)
    table = agent_table or load_agent_table()

    results: list[CaseResult] = []
    for scenario in scenarios:
        service = build_case_service(scenario, out_dir / "sessions", table)
        result = run_case(scenario, service=service)
        if not result.errored:
            report_bytes = service.load_report(f"s-{scenario.scenario_id}")
            report_path = reports_dir / f"{scenario.scenario_id}.report.json"
            report_path.write_bytes(report_bytes)
            result.report_path = str(report_path)
        results.append(result)

    metrics = build_metrics(results, survey_ease=load_survey())
    metrics_path = out_dir / "metrics.json"
    metrics_path.write_text(
        json.dumps(metrics, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    return results, metrics


__all__ = [
    "CaseRunError",
    "build_case_service",
    "drive_scenario",
    "judge_case",
    "run_case",
    "run_suite",
    "render_metrics_table",
]
