"""Deterministic scripted conversation backend with fault injection."""

from .backend import (
    BackendEvents,
    GARBLED_TEXT,
    REPROMPT_PREFIX,
    ScriptState,
    ScriptUnderrunError,
    ScriptedBackend,
    respond,
)
from .script import (
    CANNED_FINDINGS,
    COMPONENT_FIELDS,
    ConversationScript,
    FaultSpec,
    SCRIPT_SCHEMA,
    ScriptError,
    ScriptStep,
    inject_fault,
    load_bundled_script,
    load_script,
    normalize_text,
    parse_script,
    validate_script,
)

__all__ = [
    "BackendEvents",
    "CANNED_FINDINGS",
    "COMPONENT_FIELDS",
    "ConversationScript",
    "FaultSpec",
    "GARBLED_TEXT",
    "REPROMPT_PREFIX",
    "SCRIPT_SCHEMA",
    "ScriptError",
    "ScriptState",
    "ScriptStep",
    "ScriptUnderrunError",
    "ScriptedBackend",
    "inject_fault",
    "load_bundled_script",
    "load_script",
    "normalize_text",
    "parse_script",
    "respond",
    "validate_script",
]
