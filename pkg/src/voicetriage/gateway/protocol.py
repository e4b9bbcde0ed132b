"""Wire protocol for the duplex session channel.

Messages are JSON envelopes ``{type, session_id, seq, payload}`` with a
strictly increasing ``seq`` per direction. The schema is transport
independent: anything that can carry ordered JSON messages both ways
(WebSocket in production, an in-process pipe in the harness) conforms.
"""

from __future__ import annotations

import base64
import binascii
from dataclasses import dataclass, field
from typing import Any, Optional

PROTO_VERSION = "voice/1"

# Audio contract: PCM16 mono 24 kHz, base64 frames of at most 4096 samples.
AUDIO_SAMPLE_RATE = 24000
MAX_FRAME_SAMPLES = 4096
MAX_TURN_AUDIO_SECONDS = 120
MAX_TURN_AUDIO_SAMPLES = MAX_TURN_AUDIO_SECONDS * AUDIO_SAMPLE_RATE

# Video upload limits.
VIDEO_MAX_BYTES = 50 * 1024 * 1024
VIDEO_MAX_DURATION_S = 60
VIDEO_CONTENT_TYPES = ("video/webm", "video/mp4")

INACTIVITY_TIMEOUT_S = 300

CLIENT_TYPES = frozenset(
    {
        "session.start",
        "ptt.begin",
        "audio.frame",
        "ptt.end",
        "text.turn",
        "video.complete",
        "video.skip",
        "session.end",
    }
)

SERVER_TYPES = frozenset(
    {
        "session.accepted",
        "transcript.user",
        "assistant.text",
        "assistant.audio.frame",
        "video.request",
        "state.phase",
        "report.final",
        "error",
    }
)


class ErrorCode:
    BAD_ENVELOPE = "BAD_ENVELOPE"
    BAD_SEQ = "BAD_SEQ"
    UNKNOWN_TYPE = "UNKNOWN_TYPE"
    UNSUPPORTED_PROTO = "UNSUPPORTED_PROTO"
    NO_SESSION = "NO_SESSION"
    ALREADY_STARTED = "ALREADY_STARTED"
    PTT_CLOSED = "PTT_CLOSED"
    PTT_OPEN = "PTT_OPEN"
    FRAME_TOO_LARGE = "FRAME_TOO_LARGE"
    AUDIO_CAP = "AUDIO_CAP"
    BAD_AUDIO = "BAD_AUDIO"
    STATE_VIOLATION = "STATE_VIOLATION"
    UNKNOWN_VIDEO = "UNKNOWN_VIDEO"
    SCRIPT_UNDERRUN = "SCRIPT_UNDERRUN"
    SESSION_ENDED = "SESSION_ENDED"
    INACTIVITY = "INACTIVITY"


@dataclass
class Envelope:
    type: str
    seq: int
    session_id: Optional[str] = None
    payload: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": self.type,
            "session_id": self.session_id,
            "seq": self.seq,
            "payload": self.payload,
        }


class EnvelopeError(ValueError):
    def __init__(self, code: str, detail: str):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}")


def parse_envelope(doc: Any) -> Envelope:
    if not isinstance(doc, dict):
        raise EnvelopeError(ErrorCode.BAD_ENVELOPE, "message must be a JSON object")
    msg_type = doc.get("type")
    if not isinstance(msg_type, str):
        raise EnvelopeError(ErrorCode.BAD_ENVELOPE, "missing message type")
    seq = doc.get("seq")
    if not isinstance(seq, int) or isinstance(seq, bool) or seq < 0:
        raise EnvelopeError(ErrorCode.BAD_ENVELOPE, "seq must be a non-negative integer")
    payload = doc.get("payload", {})
    if not isinstance(payload, dict):
        raise EnvelopeError(ErrorCode.BAD_ENVELOPE, "payload must be an object")
    session_id = doc.get("session_id")
    if session_id is not None and not isinstance(session_id, str):
        raise EnvelopeError(ErrorCode.BAD_ENVELOPE, "session_id must be a string")
    return Envelope(type=msg_type, seq=seq, session_id=session_id, payload=payload)


def decode_audio_frame(payload: dict[str, Any]) -> bytes:
    """Validate and decode one base64 PCM16 frame."""
    raw = payload.get("pcm16_b64")
    if not isinstance(raw, str):
        raise EnvelopeError(ErrorCode.BAD_AUDIO, "audio.frame requires pcm16_b64")
    try:
        data = base64.b64decode(raw, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise EnvelopeError(ErrorCode.BAD_AUDIO, f"invalid base64 audio: {exc}") from exc
    if len(data) % 2 != 0:
        raise EnvelopeError(ErrorCode.BAD_AUDIO, "PCM16 frame must be an even byte count")
    samples = len(data) // 2
    if samples > MAX_FRAME_SAMPLES:
        raise EnvelopeError(
            ErrorCode.FRAME_TOO_LARGE,
            f"{samples} samples exceeds the {MAX_FRAME_SAMPLES}-sample frame limit",
        )
    return data
