"""Conversation backend boundary.

Two implementations satisfy the same contract: the deterministic scripted
replay (used by every test and the harness) and a thin client for a live
realtime speech model, selected with ``VOICE_BACKEND=realtime``. Backends
never touch the assessment state directly; everything flows through the
tool calls they emit.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from typing import Optional, Protocol

from ..agents import AgentId, ToolCall, ToolKind
from ..scripted.backend import BackendEvents


class BackendInterface(Protocol):
    def begin(self, instructions: str) -> BackendEvents: ...

    def user_turn(self, text: str) -> BackendEvents: ...

    def tool_result(self, result: object) -> None: ...

    def set_instructions(self, agent_id: AgentId, instructions: str) -> None: ...


class BackendConfigError(ValueError):
    pass


@dataclass
class RealtimeConfig:
    endpoint: str
    api_key: str
    model: str = "realtime-preview"

    def __post_init__(self) -> None:
        if not self.endpoint:
            raise BackendConfigError("realtime backend requires an endpoint")
        if not self.api_key:
            raise BackendConfigError("realtime backend requires an API key")


_TOOL_NAMES = {
    "update_assessment_state": ToolKind.UPDATE_ASSESSMENT_STATE,
    "start_video_recording": ToolKind.START_VIDEO_RECORDING,
    "transfer_agent": ToolKind.TRANSFER_AGENT,
    "run_final_analysis": ToolKind.RUN_FINAL_ANALYSIS,
    "disconnect_session": ToolKind.DISCONNECT,
}


class RealtimeBackend:
    """Minimal client for a realtime speech-to-speech endpoint speaking a
    JSON event protocol over a WebSocket.

    Excluded from the deterministic test suite; the scripted backend is
    the acceptance path.
    """

    def __init__(self, config: RealtimeConfig):
        self.config = config
        self._ws = None
        self._pending_transcript: Optional[str] = None

    def _connected(self):
        if self._ws is None:
            from websockets.sync.client import connect

            self._ws = connect(
                self.config.endpoint,
                additional_headers={"Authorization": f"Bearer {self.config.api_key}"},
            )
        return self._ws

    def begin(self, instructions: str) -> BackendEvents:
        ws = self._connected()
        ws.send(
            json.dumps(
                {
                    "type": "session.update",
                    "session": {
                        "instructions": instructions,
                        "modalities": ["text", "audio"],
                    },
                }
            )
        )
        ws.send(json.dumps({"type": "response.create"}))
        return self._collect_response("")

    def user_turn(self, text: str) -> BackendEvents:
        ws = self._connected()
        ws.send(
            json.dumps(
                {
                    "type": "conversation.item.create",
                    "item": {
                        "type": "message",
                        "role": "user",
                        "content": [{"type": "input_text", "text": text}],
                    },
                }
            )
        )
        ws.send(json.dumps({"type": "response.create"}))
        return self._collect_response(text)

    def user_audio_turn(self, pcm16: bytes) -> BackendEvents:
        """One committed push-to-talk turn of PCM16 mono 24 kHz audio."""
        ws = self._connected()
        ws.send(
            json.dumps(
                {
                    "type": "input_audio_buffer.append",
                    "audio": base64.b64encode(pcm16).decode(),
                }
            )
        )
        ws.send(json.dumps({"type": "input_audio_buffer.commit"}))
        ws.send(json.dumps({"type": "response.create"}))
        return self._collect_response("")

    def tool_result(self, result: object) -> None:
        ws = self._connected()
        ws.send(
            json.dumps(
                {
                    "type": "conversation.item.create",
                    "item": {"type": "function_call_output", "output": str(result)},
                }
            )
        )

    def set_instructions(self, agent_id: AgentId, instructions: str) -> None:
        ws = self._connected()
        ws.send(
            json.dumps(
                {"type": "session.update", "session": {"instructions": instructions}}
            )
        )

    def close(self) -> None:
        if self._ws is not None:
            self._ws.close()
            self._ws = None

    def _collect_response(self, user_text: str) -> BackendEvents:
        """Drain streamed events until the response completes."""
        ws = self._connected()
        text_parts: list[str] = []
        tool_calls: list[ToolCall] = []
        transcript = user_text
        while True:
            event = json.loads(ws.recv())
            etype = event.get("type")
            if etype == "response.output_text.delta":
                text_parts.append(event.get("delta", ""))
            elif etype == "conversation.item.input_audio_transcription.completed":
                transcript = event.get("transcript", transcript)
            elif etype == "response.function_call_arguments.done":
                name = event.get("name", "")
                kind = _TOOL_NAMES.get(name)
                if kind is not None:
                    try:
                        arguments = json.loads(event.get("arguments", "{}"))
                    except json.JSONDecodeError:
                        arguments = {}
                    tool_calls.append(ToolCall(kind=kind, arguments=arguments))
            elif etype == "response.done":
                break
            elif etype == "error":
                raise RuntimeError(f"realtime backend error: {event}")
        return BackendEvents(
            user_transcript=transcript,
            assistant_text="".join(text_parts) or None,
            tool_calls=tool_calls,
        )
