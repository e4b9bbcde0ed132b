"""Agent graph: identities, per-agent tool permissions, and the predefined
assessment order.

The graph is data, not code: it loads from a JSON config (schema
``voice-agents/1``) so instructions and the transfer table can be edited
without touching the engine. A bundled default ships with the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Optional, Union

AGENTS_SCHEMA = "voice-agents/1"


class AgentId(str, Enum):
    MAIN = "main"
    ONSET_LKW = "onset_lkw"
    FACIAL = "facial"
    ARM = "arm"
    SPEECH = "speech"
    EYE_DEVIATION = "eye_deviation"
    NEGLECT = "neglect"
    ANTICOAGULANT = "anticoagulant"
    FINAL_SUMMARY = "final_summary"


COMPONENT_AGENTS = (
    AgentId.ONSET_LKW,
    AgentId.FACIAL,
    AgentId.ARM,
    AgentId.SPEECH,
    AgentId.EYE_DEVIATION,
    AgentId.NEGLECT,
    AgentId.ANTICOAGULANT,
)

#: Agents allowed to open the video modal, and the exam component each records.
VIDEO_AGENTS = {AgentId.FACIAL: "facial", AgentId.ARM: "arm"}


class ToolKind(str, Enum):
    UPDATE_ASSESSMENT_STATE = "update_assessment_state"
    START_VIDEO_RECORDING = "start_video_recording"
    TRANSFER_AGENT = "transfer_agent"
    RUN_FINAL_ANALYSIS = "run_final_analysis"
    DISCONNECT = "disconnect"


class ConfigurationError(ValueError):
    """Invalid agent table: missing agents, bad permissions or a broken graph."""


@dataclass(frozen=True)
class AgentDescriptor:
    id: AgentId
    instructions: str
    allowed_tools: frozenset[ToolKind]
    next: Optional[AgentId]


class AgentTable:
    """The full agent graph plus permission and transfer validation."""

    def __init__(self, descriptors: dict[AgentId, AgentDescriptor]):
        self.descriptors = descriptors
        self._validate()

    def __getitem__(self, agent: AgentId) -> AgentDescriptor:
        return self.descriptors[agent]

    def successor(self, agent: AgentId) -> Optional[AgentId]:
        return self.descriptors[agent].next

    def allows_tool(self, agent: AgentId, tool: ToolKind) -> bool:
        return tool in self.descriptors[agent].allowed_tools

    def allows_transfer(self, source: AgentId, target: AgentId) -> bool:
        """Transfers follow the predefined chain; additionally the main
        agent hands off to the final summary agent for the analysis."""
        if self.successor(source) == target:
            return True
        return source == AgentId.MAIN and target == AgentId.FINAL_SUMMARY

    def order(self) -> list[AgentId]:
        """Canonical traversal of a full assessment.

        Main opens, walks every component agent, returns to main for the
        closing questions, hands off to the final summary analysis, and
        ends back at main for summary delivery and disconnect.
        """
        walk = [AgentId.MAIN]
        current = self.successor(AgentId.MAIN)
        while current is not None and current != AgentId.MAIN:
            walk.append(current)
            current = self.successor(current)
        walk.append(AgentId.MAIN)
        walk.append(AgentId.FINAL_SUMMARY)
        walk.append(AgentId.MAIN)
        return walk

    def _validate(self) -> None:
        missing = [a.value for a in AgentId if a not in self.descriptors]
        if missing:
            raise ConfigurationError(f"agent table missing agents: {missing}")

        for agent, desc in self.descriptors.items():
            if ToolKind.DISCONNECT in desc.allowed_tools and agent != AgentId.MAIN:
                raise ConfigurationError(f"{agent.value} must not hold disconnect")
            if (
                ToolKind.RUN_FINAL_ANALYSIS in desc.allowed_tools
                and agent != AgentId.FINAL_SUMMARY
            ):
                raise ConfigurationError(
                    f"{agent.value} must not hold run_final_analysis"
                )
            if (
                ToolKind.START_VIDEO_RECORDING in desc.allowed_tools
                and agent not in VIDEO_AGENTS
            ):
                raise ConfigurationError(
                    f"{agent.value} must not hold start_video_recording"
                )

        # The chain from main must visit every component agent exactly once
        # and return to main without a stray cycle.
        seen: list[AgentId] = []
        current = self.successor(AgentId.MAIN)
        while current is not None and current != AgentId.MAIN:
            if current in seen:
                raise ConfigurationError(f"transfer cycle at {current.value}")
            if current == AgentId.FINAL_SUMMARY:
                raise ConfigurationError(
                    "final_summary must be reached from main, not the chain"
                )
            seen.append(current)
            current = self.successor(current)
        if current is None:
            raise ConfigurationError("component chain never returns to main")
        unreachable = [a.value for a in COMPONENT_AGENTS if a not in seen]
        if unreachable:
            raise ConfigurationError(f"unreachable agents: {unreachable}")
        if self.successor(AgentId.FINAL_SUMMARY) != AgentId.MAIN:
            raise ConfigurationError("final_summary must hand control back to main")


def load_agent_table(path: Optional[Union[str, Path]] = None) -> AgentTable:
    """Load and validate a ``voice-agents/1`` config; bundled default if no
    path is given."""
    if path is None:
        raw = (
            resources.files("voicetriage.data").joinpath("agents.json").read_text("utf-8")
        )
    else:
        raw = Path(path).read_text("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"agent config is not valid JSON: {exc}") from exc

    if doc.get("schema") != AGENTS_SCHEMA:
        raise ConfigurationError(
            f"unsupported agent config schema {doc.get('schema')!r}"
        )
    descriptors: dict[AgentId, AgentDescriptor] = {}
    for entry in doc.get("agents", []):
        try:
            agent = AgentId(entry["id"])
            tools = frozenset(ToolKind(t) for t in entry["allowed_tools"])
            nxt = AgentId(entry["next"]) if entry.get("next") else None
        except (KeyError, ValueError) as exc:
            raise ConfigurationError(f"bad agent entry {entry!r}: {exc}") from exc
        if agent in descriptors:
            raise ConfigurationError(f"duplicate agent {agent.value}")
        descriptors[agent] = AgentDescriptor(
            id=agent,
            instructions=entry.get("instructions", ""),
            allowed_tools=tools,
            next=nxt,
        )
    return AgentTable(descriptors)


def agent_order(table: Optional[AgentTable] = None) -> list[AgentId]:
    return (table or load_agent_table()).order()
