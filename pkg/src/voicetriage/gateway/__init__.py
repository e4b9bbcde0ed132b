"""Networked session layer: wire protocol, session service, persistence,
and the pluggable conversation-backend boundary."""

from .backends import BackendConfigError, BackendInterface, RealtimeBackend, RealtimeConfig
from .protocol import (
    AUDIO_SAMPLE_RATE,
    CLIENT_TYPES,
    Envelope,
    EnvelopeError,
    ErrorCode,
    INACTIVITY_TIMEOUT_S,
    MAX_FRAME_SAMPLES,
    MAX_TURN_AUDIO_SAMPLES,
    PROTO_VERSION,
    SERVER_TYPES,
    VIDEO_CONTENT_TYPES,
    VIDEO_MAX_BYTES,
    VIDEO_MAX_DURATION_S,
    decode_audio_frame,
    parse_envelope,
)
from .server import build_app, config_from_env, serve
from .service import (
    Connection,
    InProcessClient,
    ManagedSession,
    ServiceConfig,
    SessionService,
    UploadError,
)
from .store import SessionNotFoundError, SessionStore

__all__ = [
    "AUDIO_SAMPLE_RATE",
    "BackendConfigError",
    "BackendInterface",
    "CLIENT_TYPES",
    "Connection",
    "Envelope",
    "EnvelopeError",
    "ErrorCode",
    "INACTIVITY_TIMEOUT_S",
    "InProcessClient",
    "MAX_FRAME_SAMPLES",
    "MAX_TURN_AUDIO_SAMPLES",
    "ManagedSession",
    "PROTO_VERSION",
    "RealtimeBackend",
    "RealtimeConfig",
    "SERVER_TYPES",
    "ServiceConfig",
    "SessionNotFoundError",
    "SessionService",
    "SessionStore",
    "UploadError",
    "VIDEO_CONTENT_TYPES",
    "VIDEO_MAX_BYTES",
    "VIDEO_MAX_DURATION_S",
    "build_app",
    "config_from_env",
    "decode_audio_frame",
    "parse_envelope",
    "serve",
]
