"""Scripted conversation backend: replays an authored script as the
assistant. Pure function of (script, cursor, agent, normalized text);
no randomness anywhere."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..agents import AgentId, ToolCall
from .script import ConversationScript, ScriptStep, normalize_text

GARBLED_TEXT = "[unintelligible]"
REPROMPT_PREFIX = "I'm sorry, I didn't catch that. "


class ScriptUnderrunError(RuntimeError):
    """The session is still running but the script has no steps left."""


@dataclass
class BackendEvents:
    """One backend response: the turn transcription, the assistant line,
    and tool calls to dispatch, in order."""

    user_transcript: str
    assistant_text: Optional[str] = None
    tool_calls: list[ToolCall] = field(default_factory=list)
    reprompt: bool = False


@dataclass
class ScriptState:
    cursor: int = 0
    user_turns_seen: int = 0
    last_instruction: str = ""
    consumed_garbles: set[int] = field(default_factory=set)


def respond(
    script: ConversationScript,
    state: ScriptState,
    agent: AgentId,
    user_text: str,
) -> BackendEvents:
    """Advance the script cursor with one user turn.

    A keyword match emits the step's assistant line and tool calls; no
    match (or a garbled transcription) holds the cursor and reprompts.
    """
    state.user_turns_seen += 1

    transcript = user_text
    garbled = (
        state.user_turns_seen in script.garbled_turns
        and state.user_turns_seen not in state.consumed_garbles
    )
    if garbled:
        state.consumed_garbles.add(state.user_turns_seen)
        transcript = GARBLED_TEXT

    if state.cursor >= len(script.steps):
        raise ScriptUnderrunError(
            f"script {script.script_id} exhausted after {state.cursor} steps"
        )

    step = script.steps[state.cursor]
    if garbled or agent != step.expected_agent or not step.matches(
        normalize_text(user_text)
    ):
        if not garbled and step.on_no_match == "accept_any":
            return _emit(script, state, step, transcript)
        return BackendEvents(
            user_transcript=transcript,
            assistant_text=REPROMPT_PREFIX + state.last_instruction,
            reprompt=True,
        )
    return _emit(script, state, step, transcript)


def _emit(
    script: ConversationScript,
    state: ScriptState,
    step: ScriptStep,
    transcript: str,
) -> BackendEvents:
    state.cursor += 1
    if step.assistant_text:
        state.last_instruction = step.assistant_text
    return BackendEvents(
        user_transcript=transcript,
        assistant_text=step.assistant_text or None,
        tool_calls=[ToolCall(kind=c.kind, arguments=dict(c.arguments)) for c in step.tool_calls],
    )


class ScriptedBackend:
    """Conversation backend contract implementation backed by a script.

    The gateway keeps it informed of the active agent through
    ``set_instructions`` on every hand-off; state writes happen only via
    the tool calls it emits, never directly.
    """

    def __init__(self, script: ConversationScript):
        self.script = script
        self.state = ScriptState()
        self.active_agent = AgentId.MAIN

    def begin(self, instructions: str) -> BackendEvents:
        self.state.last_instruction = self.script.opening
        return BackendEvents(user_transcript="", assistant_text=self.script.opening)

    def user_turn(self, text: str) -> BackendEvents:
        return respond(self.script, self.state, self.active_agent, text)

    def tool_result(self, result: object) -> None:
        # Scripted replays take no corrective action on tool errors.
        return None

    def set_instructions(self, agent_id: AgentId, instructions: str) -> None:
        self.active_agent = agent_id

    @property
    def exhausted(self) -> bool:
        return self.state.cursor >= len(self.script.steps)
