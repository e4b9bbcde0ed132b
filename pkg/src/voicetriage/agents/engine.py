"""Session orchestration state machine.

The engine is transport-agnostic and backend-agnostic: it consumes an
ordered stream of events (user turns, backend turns with tool calls,
video registrations) and returns effects (assistant turns, video
requests, the final report). Feeding the same event sequence with the
same clock reproduces the same transcript, state and report.
"""

from __future__ import annotations

import logging
import re
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Any, Callable, Optional, Union

from ..assessment import (
    AphasiaFinding,
    ArmFinding,
    ArmSeverity,
    ArmSide,
    AssessmentState,
    ComponentScores,
    Discrepancy,
    EyeDirection,
    EyeFinding,
    EyeSeverity,
    FacialFinding,
    GlucoseReading,
    ModelError,
    NeglectFinding,
    PriorStroke,
    Report,
    Sex,
    TranscriptDigest,
    TranscriptTurn,
    VideoRef,
    build_report,
    check_consistency,
)
from ..assessment.model import AGE_MAX, AGE_MIN, GLUCOSE_MAX, GLUCOSE_MIN
from ..clock import parse_minute
from .analysis import (
    AnalysisResult,
    Analyzer,
    CLARIFIABLE_FIELDS,
    CLARIFICATION_PROMPTS,
    analyze,
)
from .graph import (
    AgentId,
    AgentTable,
    ConfigurationError,
    ToolKind,
    VIDEO_AGENTS,
    load_agent_table,
)

logger = logging.getLogger(__name__)

CLARIFICATION_CAP = 3

CLOSING_PROMPT = (
    "The assessment summary has been provided. Is there anything else I can "
    "help you with before disconnecting?"
)


class SessionStatus(str, Enum):
    RUNNING = "running"
    AWAITING_VIDEO = "awaiting_video"
    AWAITING_CLARIFICATION = "awaiting_clarification"
    FINALIZING = "finalizing"
    ENDED = "ended"


class StateViolationError(RuntimeError):
    def __init__(self, code: str, detail: str):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}")


# --- events -----------------------------------------------------------------


@dataclass
class UserTurnCommitted:
    text: str


@dataclass
class BackendTurn:
    text: Optional[str]
    tool_calls: list["ToolCall"] = field(default_factory=list)


@dataclass
class VideoRegistered:
    ref: VideoRef


@dataclass
class VideoSkipped:
    pass


Event = Union[UserTurnCommitted, BackendTurn, VideoRegistered, VideoSkipped]


# --- effects ----------------------------------------------------------------


@dataclass
class AssistantTurn:
    text: str


@dataclass
class VideoRequest:
    component: str


@dataclass
class PhaseNote:
    agent: AgentId
    status: SessionStatus


@dataclass
class ReportEmitted:
    report: Report


Effect = Union[AssistantTurn, VideoRequest, PhaseNote, ReportEmitted]


# --- tool calls -------------------------------------------------------------


@dataclass
class ToolCall:
    kind: ToolKind
    arguments: dict[str, Any] = field(default_factory=dict)


@dataclass
class ToolResult:
    ok: bool
    error: Optional[str] = None
    payload: dict[str, Any] = field(default_factory=dict)


@dataclass
class PhaseSpan:
    agent: AgentId
    entered_at: datetime
    exited_at: Optional[datetime] = None


@dataclass
class EngineConfig:
    agents: AgentTable = field(default_factory=load_agent_table)
    clock: Any = None
    session_id: Optional[str] = None
    clarification_cap: int = CLARIFICATION_CAP
    analyzer: Analyzer = analyze


def create_session(config: EngineConfig) -> "EngineSession":
    """Fresh session at the main agent with an empty assessment."""
    if config.clock is None:
        raise ConfigurationError("engine config requires a clock")
    config.agents.order()  # re-raises ConfigurationError on a broken table
    return EngineSession(config)


class EngineSession:
    def __init__(self, config: EngineConfig):
        self.config = config
        self.clock = config.clock
        self.session_id = config.session_id or uuid.uuid4().hex[:12]
        self.agents = config.agents
        self.active_agent = AgentId.MAIN
        self.assessment = AssessmentState()
        self.digest = TranscriptDigest()
        self.transcript: list[TranscriptTurn] = []
        self.phase_history: list[PhaseSpan] = [
            PhaseSpan(agent=AgentId.MAIN, entered_at=self.clock.now())
        ]
        self.status = SessionStatus.RUNNING
        self.started_at: datetime = self.clock.now()
        self.ended_at: Optional[datetime] = None
        self.clarification_rounds = 0
        self.pending_video: Optional[str] = None
        self.pending_clarifications: list[str] = []
        self.skipped_videos: list[str] = []
        self.last_analysis: Optional[AnalysisResult] = None
        self.last_tool_results: list[ToolResult] = []
        self.resolved_discrepancies: list[Discrepancy] = []
        self.report: Optional[Report] = None
        self.aborted = False

    # -- event loop ------------------------------------------------------

    def advance(self, event: Event) -> list[Effect]:
        """Process one event; all events for a session must arrive serially."""
        if self.status == SessionStatus.ENDED:
            raise StateViolationError("SESSION_ENDED", "session already ended")

        if isinstance(event, UserTurnCommitted):
            return self._on_user_turn(event.text)
        if isinstance(event, BackendTurn):
            return self._on_backend_turn(event)
        if isinstance(event, VideoRegistered):
            return self._on_video_registered(event.ref)
        if isinstance(event, VideoSkipped):
            return self._on_video_skipped()
        raise StateViolationError("BAD_EVENT", f"unknown event {event!r}")

    def _on_user_turn(self, text: str) -> list[Effect]:
        if self.status == SessionStatus.AWAITING_VIDEO:
            raise StateViolationError(
                "VIDEO_GATE", "user turn while a video recording is pending"
            )
        self._append_turn("user", text)
        if self.status == SessionStatus.AWAITING_CLARIFICATION:
            return self._on_clarification_answer(text)
        return []

    def _on_backend_turn(self, turn: BackendTurn) -> list[Effect]:
        if self.status == SessionStatus.AWAITING_VIDEO:
            raise StateViolationError(
                "VIDEO_GATE", "backend turn while a video recording is pending"
            )
        effects: list[Effect] = []
        self.last_tool_results = []
        if turn.text:
            self._append_turn("assistant", turn.text)
            effects.append(AssistantTurn(turn.text))
        for call in turn.tool_calls:
            result, call_effects = self.dispatch_tool(call)
            self.last_tool_results.append(result)
            if not result.ok:
                logger.warning(
                    "session %s: tool %s failed: %s",
                    self.session_id,
                    call.kind.value,
                    result.error,
                )
            effects.extend(call_effects)
        return effects

    def _on_video_registered(self, ref: VideoRef) -> list[Effect]:
        if self.status != SessionStatus.AWAITING_VIDEO:
            raise StateViolationError("NO_PENDING_VIDEO", "no video was requested")
        if ref.component != self.pending_video:
            raise StateViolationError(
                "WRONG_COMPONENT",
                f"pending video is {self.pending_video}, got {ref.component}",
            )
        self.assessment.videos.append(ref)
        self._append_turn(
            "system", f"video registered: {ref.component} ({ref.video_id})"
        )
        self.pending_video = None
        self.status = SessionStatus.RUNNING
        return [PhaseNote(self.active_agent, self.status)]

    def _on_video_skipped(self) -> list[Effect]:
        if self.status != SessionStatus.AWAITING_VIDEO:
            raise StateViolationError("NO_PENDING_VIDEO", "no video was requested")
        assert self.pending_video is not None
        self.skipped_videos.append(self.pending_video)
        self._append_turn("system", f"video skipped: {self.pending_video}")
        self.pending_video = None
        self.status = SessionStatus.RUNNING
        return [PhaseNote(self.active_agent, self.status)]

    # -- tool dispatch -----------------------------------------------------

    def dispatch_tool(self, call: ToolCall) -> tuple[ToolResult, list[Effect]]:
        """Run one tool call under the active agent's permissions.

        Permission and validation failures are non-fatal: they return an
        error result, mutate nothing, and the conversation continues.
        """
        if not self.agents.allows_tool(self.active_agent, call.kind):
            return (
                ToolResult(
                    ok=False,
                    error=(
                        f"tool {call.kind.value} not allowed for agent "
                        f"{self.active_agent.value}"
                    ),
                ),
                [],
            )
        handler = {
            ToolKind.UPDATE_ASSESSMENT_STATE: self._tool_update,
            ToolKind.START_VIDEO_RECORDING: self._tool_start_video,
            ToolKind.TRANSFER_AGENT: self._tool_transfer,
            ToolKind.RUN_FINAL_ANALYSIS: self._tool_run_analysis,
            ToolKind.DISCONNECT: self._tool_disconnect,
        }[call.kind]
        return handler(call.arguments)

    def _tool_update(self, args: dict[str, Any]) -> tuple[ToolResult, list[Effect]]:
        field_path = args.get("field")
        if not isinstance(field_path, str):
            return ToolResult(ok=False, error="update requires a field path"), []
        value = args.get("value")
        try:
            self._apply_update(field_path, value, resolve=False)
        except (ModelError, ValueError, KeyError, TypeError) as exc:
            return ToolResult(ok=False, error=f"invalid update: {exc!r}"), []
        return ToolResult(ok=True), []

    def _tool_start_video(
        self, args: dict[str, Any]
    ) -> tuple[ToolResult, list[Effect]]:
        component = args.get("component")
        if component not in ("facial", "arm"):
            return ToolResult(ok=False, error=f"bad video component {component!r}"), []
        if VIDEO_AGENTS.get(self.active_agent) != component:
            return (
                ToolResult(
                    ok=False,
                    error=f"agent {self.active_agent.value} cannot record {component}",
                ),
                [],
            )
        if any(v.component == component for v in self.assessment.videos):
            return (
                ToolResult(ok=False, error=f"{component} video already recorded"),
                [],
            )
        self.pending_video = component
        self.status = SessionStatus.AWAITING_VIDEO
        return ToolResult(ok=True), [VideoRequest(component)]

    def _tool_transfer(self, args: dict[str, Any]) -> tuple[ToolResult, list[Effect]]:
        try:
            target = AgentId(args.get("target"))
        except ValueError:
            return ToolResult(ok=False, error=f"unknown agent {args.get('target')!r}"), []
        if not self.agents.allows_transfer(self.active_agent, target):
            return (
                ToolResult(
                    ok=False,
                    error=(
                        f"transfer {self.active_agent.value} -> {target.value} not in "
                        "the predefined order"
                    ),
                ),
                [],
            )
        self._enter_agent(target)
        return ToolResult(ok=True), [PhaseNote(target, self.status)]

    def _tool_run_analysis(
        self, args: dict[str, Any]
    ) -> tuple[ToolResult, list[Effect]]:
        result, effects = self.run_final_analysis()
        return ToolResult(ok=True, payload={"clarifications": result.clarifications_needed}), effects

    def _tool_disconnect(self, args: dict[str, Any]) -> tuple[ToolResult, list[Effect]]:
        effects = self._finalize(aborted=False)
        return ToolResult(ok=True), effects

    # -- final analysis ----------------------------------------------------

    def run_final_analysis(self) -> tuple[AnalysisResult, list[Effect]]:
        """Recompute scores, cross-check the record, and either route a
        clarification through the main agent or finalize the narrative."""
        if self.active_agent != AgentId.FINAL_SUMMARY:
            raise StateViolationError(
                "WRONG_AGENT", "final analysis requires the final summary agent"
            )
        allow = self.clarification_rounds < self.config.clarification_cap
        result = self.config.analyzer(
            self.assessment, self.digest, allow_clarification=allow
        )
        self.last_analysis = result
        self.assessment.scores = result.corrected_scores
        self.assessment.recorded_total = result.corrected_scores.partial_total

        if result.clarifications_needed:
            self.pending_clarifications = list(result.clarifications_needed)
            self._enter_agent(AgentId.MAIN)
            self.status = SessionStatus.AWAITING_CLARIFICATION
            effects: list[Effect] = [PhaseNote(AgentId.MAIN, self.status)]
            effects.extend(self._ask_clarification())
            return result, effects

        self.assessment.stroke_likely = result.stroke_likely
        self.assessment.lvo_likely = result.lvo_likely
        self.assessment.summary_narrative = result.narrative
        self._enter_agent(AgentId.MAIN)
        self.status = SessionStatus.RUNNING
        effects = [PhaseNote(AgentId.MAIN, self.status)]
        assert result.narrative is not None
        for text in (result.narrative, CLOSING_PROMPT):
            self._append_turn("assistant", text)
            effects.append(AssistantTurn(text))
        return result, effects

    def _ask_clarification(self) -> list[Effect]:
        field_path = self.pending_clarifications[0]
        prompt = CLARIFICATION_PROMPTS.get(
            field_path,
            f"I need to clarify one thing: could you confirm the {field_path}? "
            "I have a discrepancy in the records.",
        )
        self.clarification_rounds += 1
        self._append_turn("assistant", prompt)
        return [AssistantTurn(prompt)]

    def _on_clarification_answer(self, text: str) -> list[Effect]:
        field_path = self.pending_clarifications[0]
        value = _parse_clarification(field_path, text)
        if value is not None:
            self._apply_update(field_path, value, resolve=True)
            self.pending_clarifications.pop(0)
            if self.last_analysis is not None:
                # Keep the resolved conflict on the record for the report.
                kinds = {k for k, f in CLARIFIABLE_FIELDS.items() if f == field_path}
                self.resolved_discrepancies.extend(
                    d for d in self.last_analysis.discrepancies if d.kind in kinds
                )
            if (
                self.pending_clarifications
                and self.clarification_rounds < self.config.clarification_cap
            ):
                return self._ask_clarification()
            self.pending_clarifications = []
            self.status = SessionStatus.RUNNING
            self._enter_agent(AgentId.FINAL_SUMMARY)
            _, effects = self.run_final_analysis()
            return effects
        if self.clarification_rounds < self.config.clarification_cap:
            return self._ask_clarification()
        # Give up: finish the analysis with the conflict flagged, not asked.
        self.pending_clarifications = []
        self.status = SessionStatus.RUNNING
        self._enter_agent(AgentId.FINAL_SUMMARY)
        self.clarification_rounds = self.config.clarification_cap
        _, effects = self.run_final_analysis()
        return effects

    # -- finalization ------------------------------------------------------

    def abort(self, reason: str) -> list[Effect]:
        """Terminate early; the report carries completeness flags."""
        if self.status == SessionStatus.ENDED:
            return []
        self._append_turn("system", f"session aborted: {reason}")
        return self._finalize(aborted=True)

    def _finalize(self, aborted: bool) -> list[Effect]:
        self.status = SessionStatus.FINALIZING
        self.aborted = aborted
        self.ended_at = self.clock.now()
        discrepancies = self._report_discrepancies()
        report = build_report(
            self.assessment,
            self.transcript,
            self.assessment.videos,
            session_id=self.session_id,
            started_at=self.started_at,
            ended_at=self.ended_at,
            discrepancies=discrepancies,
            aborted=aborted,
        )
        self.report = report
        self.status = SessionStatus.ENDED
        self._close_phase()
        return [ReportEmitted(report)]

    def _report_discrepancies(self) -> list[Discrepancy]:
        if self.last_analysis is not None:
            return self.resolved_discrepancies + self.last_analysis.discrepancies
        return self.resolved_discrepancies + check_consistency(
            self.assessment, self.digest
        )

    # -- internals ---------------------------------------------------------

    def _append_turn(self, speaker: str, text: str) -> None:
        self.transcript.append(
            TranscriptTurn(speaker=speaker, text=text, timestamp=self.clock.now())
        )

    def _enter_agent(self, target: AgentId) -> None:
        self._close_phase()
        self.active_agent = target
        self.phase_history.append(
            PhaseSpan(agent=target, entered_at=self.clock.now())
        )

    def _close_phase(self) -> None:
        if self.phase_history and self.phase_history[-1].exited_at is None:
            self.phase_history[-1].exited_at = self.clock.now()

    def _apply_update(self, field_path: str, value: Any, *, resolve: bool) -> None:
        setter = _FIELD_SETTERS.get(field_path)
        if setter is None:
            raise ModelError(f"unknown assessment field {field_path!r}")
        setter(self, value)
        if resolve:
            # A clarified answer supersedes the conflicting history.
            self.digest.clear_field(field_path)
        self.digest.record(field_path, _journal_value(value))
        self._append_turn(
            "system", f"state update: {field_path} = {_journal_value(value)!r}"
        )

    def resolve_timestamp(self, value: Any) -> Optional[datetime]:
        """Accept an absolute minute timestamp or a day-offset/time pair
        resolved against the session start date (UTC)."""
        if value is None:
            return None
        if isinstance(value, str):
            return parse_minute(value)
        if isinstance(value, dict) and "time" in value:
            match = re.fullmatch(r"(\d{1,2}):(\d{2})", str(value["time"]))
            if not match:
                raise ModelError(f"bad clock time {value['time']!r}")
            hour, minute = int(match.group(1)), int(match.group(2))
            if hour > 23 or minute > 59:
                raise ModelError(f"bad clock time {value['time']!r}")
            base = self.started_at.astimezone(timezone.utc)
            day = base.date() + timedelta(days=int(value.get("day_offset", 0)))
            return datetime(
                day.year, day.month, day.day, hour, minute, tzinfo=timezone.utc
            )
        raise ModelError(f"bad timestamp value {value!r}")


def _journal_value(value: Any) -> Any:
    return value


def _parse_clarification(field_path: str, text: str) -> Optional[Any]:
    lowered = text.lower()
    if field_path == "demographics.sex":
        if "female" in lowered:
            return "female"
        if "male" in lowered:
            return "male"
    return None


# --- field setters ------------------------------------------------------


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ModelError(message)


def _as_bool(value: Any) -> bool:
    _require(isinstance(value, bool), f"expected a boolean, got {value!r}")
    return value


def _set_age(s: EngineSession, value: Any) -> None:
    if value is None:
        s.assessment.demographics.age = None
        return
    _require(isinstance(value, int) and not isinstance(value, bool), "age must be an integer")
    _require(AGE_MIN <= value <= AGE_MAX, f"age {value} out of range")
    s.assessment.demographics.age = value


def _set_sex(s: EngineSession, value: Any) -> None:
    s.assessment.demographics.sex = Sex(value) if value is not None else Sex.UNKNOWN


def _set_lkw(s: EngineSession, value: Any) -> None:
    s.assessment.times.last_known_well = s.resolve_timestamp(value)


def _set_onset(s: EngineSession, value: Any) -> None:
    s.assessment.times.symptom_onset = s.resolve_timestamp(value)


def _set_witnessed(s: EngineSession, value: Any) -> None:
    s.assessment.times.onset_witnessed = None if value is None else _as_bool(value)


def _set_facial(s: EngineSession, value: Any) -> None:
    s.assessment.findings.facial = None if value is None else FacialFinding(value)


def _set_arm(s: EngineSession, value: Any) -> None:
    if value is None:
        s.assessment.findings.arm = None
        return
    _require(isinstance(value, dict), "arm finding must be an object")
    s.assessment.findings.arm = ArmFinding(
        side=ArmSide(value["side"]), severity=ArmSeverity(value["severity"])
    )


def _set_slurred(s: EngineSession, value: Any) -> None:
    s.assessment.findings.speech_slurred = None if value is None else _as_bool(value)


def _ensure_aphasia(s: EngineSession) -> AphasiaFinding:
    if s.assessment.findings.aphasia is None:
        s.assessment.findings.aphasia = AphasiaFinding()
    return s.assessment.findings.aphasia


def _set_aphasia(s: EngineSession, value: Any) -> None:
    if value is None:
        s.assessment.findings.aphasia = None
        return
    _require(isinstance(value, dict), "aphasia finding must be an object")
    items = value["items_named"]
    _require(isinstance(items, int) and 0 <= items <= 3, "items_named must be 0-3")
    s.assessment.findings.aphasia = AphasiaFinding(
        items_named=items,
        command_performed=_as_bool(value["command_performed"]),
        mute_or_global=_as_bool(value.get("mute_or_global", False)),
    )


def _set_items_named(s: EngineSession, value: Any) -> None:
    _require(isinstance(value, int) and 0 <= value <= 3, "items_named must be 0-3")
    _ensure_aphasia(s).items_named = value


def _set_command(s: EngineSession, value: Any) -> None:
    performed = _as_bool(value)
    _ensure_aphasia(s).command_performed = performed


def _set_mute(s: EngineSession, value: Any) -> None:
    mute = _as_bool(value)
    _ensure_aphasia(s).mute_or_global = mute


def _set_eye(s: EngineSession, value: Any) -> None:
    if value is None:
        s.assessment.findings.eye = None
        return
    _require(isinstance(value, dict), "eye finding must be an object")
    s.assessment.findings.eye = EyeFinding(
        direction=EyeDirection(value["direction"]),
        severity=EyeSeverity(value["severity"]),
    )


def _set_neglect(s: EngineSession, value: Any) -> None:
    if value is None:
        s.assessment.findings.neglect = None
        return
    _require(isinstance(value, dict), "neglect finding must be an object")
    s.assessment.findings.neglect = NeglectFinding(
        recognizes_weakness=_as_bool(value["recognizes_weakness"]),
        recognizes_own_arm=_as_bool(value["recognizes_own_arm"]),
    )


def _set_anticoagulants(s: EngineSession, value: Any) -> None:
    anc = s.assessment.ancillary
    if value is None:
        anc.anticoagulants = None
        anc.last_dose_time = None
        return
    _require(
        isinstance(value, list) and all(isinstance(v, str) for v in value),
        "anticoagulants must be a list of drug names",
    )
    anc.anticoagulants = list(value)
    if not value:
        # No drugs means no dose time can apply.
        anc.last_dose_time = None


def _set_last_dose(s: EngineSession, value: Any) -> None:
    anc = s.assessment.ancillary
    ts = s.resolve_timestamp(value)
    if ts is not None:
        _require(
            bool(anc.anticoagulants),
            "last dose time requires a recorded anticoagulant",
        )
    anc.last_dose_time = ts


def _set_prior_stroke(s: EngineSession, value: Any) -> None:
    anc = s.assessment.ancillary
    if value is None:
        anc.prior_stroke = None
        anc.prior_stroke_detail = None
        return
    if isinstance(value, dict):
        status = PriorStroke(value["status"])
        detail = value.get("detail")
        _require(detail is None or isinstance(detail, str), "detail must be text")
        anc.prior_stroke = status
        anc.prior_stroke_detail = detail
    else:
        anc.prior_stroke = PriorStroke(value)
        anc.prior_stroke_detail = None


def _set_glucose(s: EngineSession, value: Any) -> None:
    anc = s.assessment.ancillary
    if value is None:
        anc.glucose = None
        return
    if value == "unmeasurable":
        anc.glucose = GlucoseReading(value_mg_dl=None, unmeasurable=True)
        return
    _require(isinstance(value, int) and not isinstance(value, bool), "glucose must be an integer or 'unmeasurable'")
    _require(GLUCOSE_MIN <= value <= GLUCOSE_MAX, f"glucose {value} out of range")
    anc.glucose = GlucoseReading(value_mg_dl=value, unmeasurable=False)


def _make_score_setter(component: str) -> Callable[[EngineSession, Any], None]:
    def setter(s: EngineSession, value: Any) -> None:
        _require(
            value is None or (isinstance(value, int) and not isinstance(value, bool)),
            f"{component} score must be an integer",
        )
        if s.assessment.scores is None:
            s.assessment.scores = ComponentScores()
        setattr(s.assessment.scores, component, value)

    return setter


def _set_recorded_total(s: EngineSession, value: Any) -> None:
    _require(
        value is None or (isinstance(value, int) and not isinstance(value, bool)),
        "total must be an integer",
    )
    s.assessment.recorded_total = value


_FIELD_SETTERS: dict[str, Callable[[EngineSession, Any], None]] = {
    "demographics.age": _set_age,
    "demographics.sex": _set_sex,
    "times.last_known_well": _set_lkw,
    "times.symptom_onset": _set_onset,
    "times.onset_witnessed": _set_witnessed,
    "findings.facial": _set_facial,
    "findings.arm": _set_arm,
    "findings.speech_slurred": _set_slurred,
    "findings.aphasia": _set_aphasia,
    "findings.aphasia.items_named": _set_items_named,
    "findings.aphasia.command_performed": _set_command,
    "findings.aphasia.mute_or_global": _set_mute,
    "findings.eye": _set_eye,
    "findings.neglect": _set_neglect,
    "ancillary.anticoagulants": _set_anticoagulants,
    "ancillary.last_dose_time": _set_last_dose,
    "ancillary.prior_stroke": _set_prior_stroke,
    "ancillary.glucose": _set_glucose,
    "scores.facial": _make_score_setter("facial"),
    "scores.arm": _make_score_setter("arm"),
    "scores.speech": _make_score_setter("speech"),
    "scores.eye": _make_score_setter("eye"),
    "scores.neglect": _make_score_setter("neglect"),
    "scores.total": _set_recorded_total,
}

UPDATABLE_FIELDS = frozenset(_FIELD_SETTERS)
