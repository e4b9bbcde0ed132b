"""Transport-agnostic session service.

A :class:`Connection` consumes client envelopes and returns server
envelopes; the WebSocket layer and the in-process harness both drive this
same code, so protocol behavior is identical (and testable) without a
network. Each session processes its events strictly serially under its
own lock; distinct sessions are independent.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Any, Callable, Optional

from ..agents import (
    AgentId,
    AgentTable,
    AssistantTurn,
    BackendTurn,
    EngineConfig,
    EngineSession,
    PhaseNote,
    ReportEmitted,
    SessionStatus,
    StateViolationError,
    UserTurnCommitted,
    VideoRegistered,
    VideoRequest,
    VideoSkipped,
    create_session,
    load_agent_table,
)
from ..assessment import VideoRef, build_report, check_consistency
from ..clock import DEFAULT_SYNTHETIC_START, SyntheticClock, format_minute
from ..scripted.backend import ScriptUnderrunError
from .protocol import (
    CLIENT_TYPES,
    Envelope,
    EnvelopeError,
    ErrorCode,
    INACTIVITY_TIMEOUT_S,
    MAX_TURN_AUDIO_SAMPLES,
    PROTO_VERSION,
    VIDEO_CONTENT_TYPES,
    VIDEO_MAX_BYTES,
    VIDEO_MAX_DURATION_S,
    decode_audio_frame,
    parse_envelope,
)
from .store import SessionStore

logger = logging.getLogger(__name__)

# Synthetic seconds charged per handled message, keyed by message type.
# Everything else costs the base amount.
TURN_SECONDS = 20
VIDEO_COMPLETE_SECONDS = 25
BASE_SECONDS = 2


class UploadError(ValueError):
    def __init__(self, code: str, detail: str, http_status: int):
        self.code = code
        self.detail = detail
        self.http_status = http_status
        super().__init__(f"{code}: {detail}")


@dataclass
class ServiceConfig:
    data_dir: Path
    backend_factory: Callable[[str], Any]
    agent_table: AgentTable = dataclass_field(default_factory=load_agent_table)
    clock_factory: Callable[[], Any] = lambda: SyntheticClock(DEFAULT_SYNTHETIC_START)
    session_id_factory: Optional[Callable[[], str]] = None
    clarification_cap: int = 3
    inactivity_timeout_s: int = INACTIVITY_TIMEOUT_S


class ManagedSession:
    def __init__(self, engine: EngineSession, backend: Any):
        self.engine = engine
        self.backend = backend
        self.lock = threading.RLock()
        self.mode = "voice"
        self.ptt_open = False
        self.turn_audio_samples = 0
        self.turn_audio_chunks: list[bytes] = []
        self.uploaded_videos: dict[str, VideoRef] = {}
        self.report_bytes: Optional[bytes] = None
        self.report_sent = False
        self.persisted_turns = 0
        self.persist_marker: tuple = ()
        self.last_backend_agent = AgentId.MAIN
        self.last_activity = engine.clock.now()

    @property
    def session_id(self) -> str:
        return self.engine.session_id


class SessionService:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = SessionStore(Path(config.data_dir))
        self.sessions: dict[str, ManagedSession] = {}
        self._lock = threading.Lock()
        self.store.recover_all()

    # -- connections -------------------------------------------------------

    def open_connection(self) -> "Connection":
        return Connection(self)

    def get_session(self, session_id: str) -> Optional[ManagedSession]:
        with self._lock:
            return self.sessions.get(session_id)

    def create_managed_session(self, mode: str) -> ManagedSession:
        session_id = (
            self.config.session_id_factory()
            if self.config.session_id_factory
            else uuid.uuid4().hex[:12]
        )
        engine = create_session(
            EngineConfig(
                agents=self.config.agent_table,
                clock=self.config.clock_factory(),
                session_id=session_id,
                clarification_cap=self.config.clarification_cap,
            )
        )
        backend = self.config.backend_factory(session_id)
        managed = ManagedSession(engine, backend)
        managed.mode = mode
        with self._lock:
            if session_id in self.sessions:
                raise ValueError(f"duplicate session id {session_id}")
            self.sessions[session_id] = managed
        self.store.session_dir(session_id, create=True)
        return managed

    # -- video upload ------------------------------------------------------

    def upload_video(
        self,
        session_id: str,
        component: str,
        data: bytes,
        content_type: str,
        duration_s: float = 0.0,
    ) -> str:
        session = self.get_session(session_id)
        if session is None:
            raise UploadError("UNKNOWN_SESSION", f"no session {session_id}", 404)
        with session.lock:
            engine = session.engine
            if component not in ("facial", "arm"):
                raise UploadError("BAD_COMPONENT", f"bad component {component}", 400)
            if (
                engine.status != SessionStatus.AWAITING_VIDEO
                or engine.pending_video != component
            ):
                raise UploadError(
                    "NO_PENDING_VIDEO",
                    f"session is not waiting for a {component} video",
                    409,
                )
            if content_type not in VIDEO_CONTENT_TYPES:
                raise UploadError(
                    "UNSUPPORTED_TYPE", f"content type {content_type} not allowed", 415
                )
            if len(data) > VIDEO_MAX_BYTES:
                raise UploadError(
                    "TOO_LARGE", f"{len(data)} bytes exceeds the 50 MB limit", 413
                )
            if duration_s > VIDEO_MAX_DURATION_S:
                raise UploadError(
                    "TOO_LONG", f"{duration_s} s exceeds the 60 s limit", 413
                )
            video_id = f"v-{session_id}-{component}"
            uri = self.store.save_video(
                session_id, component, data, video_id, content_type, duration_s
            )
            session.uploaded_videos[video_id] = VideoRef(
                component=component, video_id=video_id, duration_s=duration_s, uri=uri
            )
            return video_id

    # -- reports -----------------------------------------------------------

    def load_report(self, session_id: str) -> bytes:
        return self.store.load_report(session_id)

    # -- lifecycle ---------------------------------------------------------

    def sweep_idle(self) -> dict[str, list[dict[str, Any]]]:
        """Abort sessions quiet for longer than the inactivity timeout.

        Returns the report envelopes per aborted session so a transport
        holding the connection can still deliver them.
        """
        results: dict[str, list[dict[str, Any]]] = {}
        for session in self._session_snapshot():
            with session.lock:
                if session.engine.status == SessionStatus.ENDED:
                    continue
                idle = (
                    session.engine.clock.now() - session.last_activity
                ).total_seconds()
                if idle < self.config.inactivity_timeout_s:
                    continue
                effects = session.engine.abort("inactivity timeout")
                results[session.session_id] = self._materialize_effects(
                    session, effects, seq_start=None
                )
        return results

    def shutdown(self) -> dict[str, list[dict[str, Any]]]:
        """Drain: abort every live session with a persisted abort report."""
        results: dict[str, list[dict[str, Any]]] = {}
        for session in self._session_snapshot():
            with session.lock:
                if session.engine.status == SessionStatus.ENDED:
                    continue
                effects = session.engine.abort("service shutdown")
                results[session.session_id] = self._materialize_effects(
                    session, effects, seq_start=None
                )
        return results

    def _session_snapshot(self) -> list[ManagedSession]:
        with self._lock:
            return list(self.sessions.values())

    # -- persistence helpers -------------------------------------------------

    def persist_session(self, session: ManagedSession) -> None:
        """Append new transcript turns and refresh the abort-ready snapshot."""
        engine = session.engine
        marker = (
            len(engine.transcript),
            engine.status,
            engine.pending_video,
            len(engine.assessment.videos),
            session.report_sent,
        )
        if marker == session.persist_marker:
            return
        session.persist_marker = marker
        turns = engine.transcript
        while session.persisted_turns < len(turns):
            turn = turns[session.persisted_turns]
            self.store.append_turn(
                session.session_id,
                {
                    "speaker": turn.speaker,
                    "text": turn.text,
                    "at": format_minute(turn.timestamp),
                },
            )
            session.persisted_turns += 1
        if engine.status != SessionStatus.ENDED:
            snapshot = build_report(
                engine.assessment,
                engine.transcript,
                engine.assessment.videos,
                session_id=engine.session_id,
                started_at=engine.started_at,
                ended_at=engine.clock.now(),
                discrepancies=check_consistency(engine.assessment, engine.digest),
                aborted=True,
            ).payload
            self.store.write_state(session.session_id, snapshot)

    def _materialize_effects(
        self,
        session: ManagedSession,
        effects: list[Any],
        seq_start: Optional[int],
    ) -> list[dict[str, Any]]:
        """Map engine effects to server envelopes (sequence numbers are
        assigned by the connection; out-of-band paths pass None and get a
        local counter)."""
        envelopes: list[dict[str, Any]] = []
        seq = seq_start if seq_start is not None else 1
        for effect in effects:
            body = self.effect_payload(session, effect)
            if body is None:
                continue
            msg_type, payload = body
            envelopes.append(
                Envelope(
                    type=msg_type,
                    seq=seq,
                    session_id=session.session_id,
                    payload=payload,
                ).to_dict()
            )
            seq += 1
        self.persist_session(session)
        return envelopes

    def effect_payload(
        self, session: ManagedSession, effect: Any
    ) -> Optional[tuple[str, dict[str, Any]]]:
        if isinstance(effect, AssistantTurn):
            return "assistant.text", {"text": effect.text, "final": True}
        if isinstance(effect, VideoRequest):
            return "video.request", {"component": effect.component}
        if isinstance(effect, PhaseNote):
            if effect.agent != session.last_backend_agent:
                session.last_backend_agent = effect.agent
                instructions = self.config.agent_table[effect.agent].instructions
                session.backend.set_instructions(effect.agent, instructions)
            return "state.phase", {
                "agent_id": effect.agent.value,
                "status": effect.status.value,
                "detail": (
                    session.engine.pending_clarifications[0]
                    if session.engine.pending_clarifications
                    else None
                ),
            }
        if isinstance(effect, ReportEmitted):
            if session.report_sent:
                logger.error(
                    "suppressed duplicate report for session %s", session.session_id
                )
                return None
            report_bytes = effect.report.to_bytes()
            session.report_bytes = report_bytes
            session.report_sent = True
            self.store.write_report(session.session_id, report_bytes)
            return "report.final", {
                "report_json": report_bytes.decode("utf-8")
            }
        return None


class Connection:
    """One duplex channel bound to at most one session.

    ``handle`` takes a decoded client message and returns the ordered
    server messages it produced. A closed connection accepts nothing.
    """

    def __init__(self, service: SessionService):
        self.service = service
        self.session: Optional[ManagedSession] = None
        self.closed = False
        self._last_client_seq: Optional[int] = None
        self._server_seq = 0

    # -- outgoing helpers ----------------------------------------------------

    def _envelope(self, msg_type: str, payload: dict[str, Any]) -> dict[str, Any]:
        self._server_seq += 1
        return Envelope(
            type=msg_type,
            seq=self._server_seq,
            session_id=self.session.session_id if self.session else None,
            payload=payload,
        ).to_dict()

    def _error(self, code: str, detail: str) -> dict[str, Any]:
        return self._envelope("error", {"code": code, "detail": detail})

    def _effects(self, effects: list[Any]) -> list[dict[str, Any]]:
        assert self.session is not None
        out = []
        for effect in effects:
            body = self.service.effect_payload(self.session, effect)
            if body is None:
                continue
            msg_type, payload = body
            out.append(self._envelope(msg_type, payload))
            if msg_type == "report.final":
                self.closed = True
        return out

    # -- incoming ------------------------------------------------------------

    def handle(self, doc: Any) -> list[dict[str, Any]]:
        if self.closed:
            return [self._error(ErrorCode.SESSION_ENDED, "connection is closed")]
        try:
            env = parse_envelope(doc)
        except EnvelopeError as exc:
            return [self._error(exc.code, exc.detail)]

        if self._last_client_seq is not None and env.seq <= self._last_client_seq:
            self.closed = True
            return [
                self._error(
                    ErrorCode.BAD_SEQ,
                    f"seq {env.seq} not greater than {self._last_client_seq}",
                )
            ]
        self._last_client_seq = env.seq

        if env.type not in CLIENT_TYPES:
            return [self._error(ErrorCode.UNKNOWN_TYPE, f"unknown type {env.type!r}")]

        if env.type == "session.start":
            return self._on_session_start(env)

        if self.session is None:
            return [self._error(ErrorCode.NO_SESSION, "session.start must come first")]

        session = self.session
        with session.lock:
            clock = session.engine.clock
            if env.type in ("text.turn", "ptt.end"):
                clock.advance(TURN_SECONDS)
            elif env.type == "video.complete":
                clock.advance(VIDEO_COMPLETE_SECONDS)
            else:
                clock.advance(BASE_SECONDS)
            session.last_activity = clock.now()
            try:
                out = self._route(env, session)
            finally:
                self.service.persist_session(session)
            return out

    def _on_session_start(self, env: Envelope) -> list[dict[str, Any]]:
        if self.session is not None:
            return [self._error(ErrorCode.ALREADY_STARTED, "session already started")]
        proto = env.payload.get("proto")
        if proto != PROTO_VERSION:
            self.closed = True
            return [
                self._error(
                    ErrorCode.UNSUPPORTED_PROTO,
                    f"unsupported protocol {proto!r}, expected {PROTO_VERSION!r}",
                )
            ]
        mode = env.payload.get("mode", "voice")
        if mode not in ("voice", "text"):
            return [self._error(ErrorCode.BAD_ENVELOPE, f"bad mode {mode!r}")]
        session = self.service.create_managed_session(mode)
        self.session = session
        with session.lock:
            out = [
                self._envelope(
                    "session.accepted",
                    {"session_id": session.session_id, "proto": PROTO_VERSION},
                ),
                self._envelope(
                    "state.phase",
                    {
                        "agent_id": session.engine.active_agent.value,
                        "status": session.engine.status.value,
                        "detail": None,
                    },
                ),
            ]
            instructions = self.service.config.agent_table[AgentId.MAIN].instructions
            events = session.backend.begin(instructions)
            effects = session.engine.advance(
                BackendTurn(text=events.assistant_text, tool_calls=events.tool_calls)
            )
            out.extend(self._effects(effects))
            self.service.persist_session(session)
            return out

    def _route(self, env: Envelope, session: ManagedSession) -> list[dict[str, Any]]:
        engine = session.engine
        handlers = {
            "ptt.begin": self._on_ptt_begin,
            "audio.frame": self._on_audio_frame,
            "ptt.end": self._on_ptt_end,
            "text.turn": self._on_text_turn,
            "video.complete": self._on_video_complete,
            "video.skip": self._on_video_skip,
            "session.end": self._on_session_end,
        }
        try:
            return handlers[env.type](env, session)
        except StateViolationError as exc:
            code = (
                ErrorCode.SESSION_ENDED
                if exc.code == "SESSION_ENDED"
                else ErrorCode.STATE_VIOLATION
            )
            return [self._error(code, exc.detail)]
        except ScriptUnderrunError as exc:
            return [self._error(ErrorCode.SCRIPT_UNDERRUN, str(exc))]

    def _on_ptt_begin(self, env: Envelope, session: ManagedSession) -> list[dict[str, Any]]:
        engine = session.engine
        if engine.status == SessionStatus.ENDED:
            return [self._error(ErrorCode.SESSION_ENDED, "session already ended")]
        if engine.status == SessionStatus.AWAITING_VIDEO:
            return [
                self._error(
                    ErrorCode.STATE_VIOLATION, "mic blocked while a video is pending"
                )
            ]
        if session.ptt_open:
            return [self._error(ErrorCode.PTT_OPEN, "push-to-talk already open")]
        session.ptt_open = True
        session.turn_audio_samples = 0
        session.turn_audio_chunks = []
        return [
            self._envelope(
                "state.phase",
                {
                    "agent_id": engine.active_agent.value,
                    "status": "listening",
                    "detail": None,
                },
            )
        ]

    def _on_audio_frame(self, env: Envelope, session: ManagedSession) -> list[dict[str, Any]]:
        if not session.ptt_open:
            return [
                self._error(
                    ErrorCode.PTT_CLOSED, "audio.frame outside a push-to-talk window"
                )
            ]
        try:
            data = decode_audio_frame(env.payload)
        except EnvelopeError as exc:
            return [self._error(exc.code, exc.detail)]
        samples = len(data) // 2
        if session.turn_audio_samples + samples > MAX_TURN_AUDIO_SAMPLES:
            return [
                self._error(
                    ErrorCode.AUDIO_CAP,
                    f"turn audio above {MAX_TURN_AUDIO_SAMPLES} samples; frame dropped",
                )
            ]
        session.turn_audio_samples += samples
        session.turn_audio_chunks.append(data)
        return []

    def _on_ptt_end(self, env: Envelope, session: ManagedSession) -> list[dict[str, Any]]:
        if not session.ptt_open:
            return [self._error(ErrorCode.PTT_CLOSED, "push-to-talk is not open")]
        session.ptt_open = False
        audio = b"".join(session.turn_audio_chunks)
        session.turn_audio_samples = 0
        session.turn_audio_chunks = []
        # Backends that consume raw audio get the buffered turn; the
        # scripted backend is text-only, so a voice turn commits as an
        # empty utterance (the deterministic path uses text.turn).
        if hasattr(session.backend, "user_audio_turn"):
            return self._commit_turn(session, "", audio=audio)
        return self._commit_turn(session, "")

    def _on_text_turn(self, env: Envelope, session: ManagedSession) -> list[dict[str, Any]]:
        text = env.payload.get("text")
        if not isinstance(text, str):
            return [self._error(ErrorCode.BAD_ENVELOPE, "text.turn requires text")]
        if session.ptt_open:
            return [
                self._error(ErrorCode.PTT_OPEN, "text.turn during an open ptt window")
            ]
        return self._commit_turn(session, text)

    def _commit_turn(
        self, session: ManagedSession, text: str, audio: Optional[bytes] = None
    ) -> list[dict[str, Any]]:
        engine = session.engine
        if engine.status == SessionStatus.AWAITING_CLARIFICATION and audio is None:
            out = [self._envelope("transcript.user", {"text": text})]
            effects = engine.advance(UserTurnCommitted(text))
            out.extend(self._effects(effects))
            return out
        if audio is not None:
            events = session.backend.user_audio_turn(audio)
        else:
            events = session.backend.user_turn(text)
        out = [self._envelope("transcript.user", {"text": events.user_transcript})]
        engine.advance(UserTurnCommitted(events.user_transcript))
        effects = engine.advance(
            BackendTurn(text=events.assistant_text, tool_calls=events.tool_calls)
        )
        for result in engine.last_tool_results:
            session.backend.tool_result(result)
        out.extend(self._effects(effects))
        return out

    def _on_video_complete(self, env: Envelope, session: ManagedSession) -> list[dict[str, Any]]:
        video_id = env.payload.get("video_id")
        ref = session.uploaded_videos.get(video_id) if isinstance(video_id, str) else None
        if ref is None:
            return [
                self._error(ErrorCode.UNKNOWN_VIDEO, f"no uploaded video {video_id!r}")
            ]
        effects = session.engine.advance(VideoRegistered(ref))
        return self._effects(effects)

    def _on_video_skip(self, env: Envelope, session: ManagedSession) -> list[dict[str, Any]]:
        effects = session.engine.advance(VideoSkipped())
        return self._effects(effects)

    def _on_session_end(self, env: Envelope, session: ManagedSession) -> list[dict[str, Any]]:
        engine = session.engine
        if engine.status == SessionStatus.ENDED:
            self.closed = True
            return [self._error(ErrorCode.SESSION_ENDED, "session already ended")]
        effects = engine.abort("client requested end")
        out = self._effects(effects)
        self.closed = True
        return out


class InProcessClient:
    """Minimal client for driving a service without a transport."""

    def __init__(self, service: SessionService):
        self.connection = service.open_connection()
        self._seq = 0

    def send(
        self, msg_type: str, payload: Optional[dict[str, Any]] = None, session_id: Optional[str] = None
    ) -> list[dict[str, Any]]:
        self._seq += 1
        return self.connection.handle(
            {
                "type": msg_type,
                "session_id": session_id,
                "seq": self._seq,
                "payload": payload or {},
            }
        )

    @property
    def closed(self) -> bool:
        return self.connection.closed
