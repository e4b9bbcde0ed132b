"""Deterministic conversation scripts (schema ``voice-script/1``).

A script replaces the speech-to-speech model with an authored turn list:
each step expects a user utterance for a given agent, matches it by
keyword containment, and emits the next assistant line plus tool calls.
Fault specs rewrite a script to reproduce documented failure modes
(skipped component, mis-scored component, hallucinated field, garbled
transcription) without touching the original.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from ..agents import AgentId, AgentTable, ToolCall, ToolKind, load_agent_table
from ..agents.engine import UPDATABLE_FIELDS

SCRIPT_SCHEMA = "voice-script/1"

COMPONENT_AGENT = {
    "facial": AgentId.FACIAL,
    "arm": AgentId.ARM,
    "speech": AgentId.SPEECH,
    "eye": AgentId.EYE_DEVIATION,
    "neglect": AgentId.NEGLECT,
}

#: Which state fields make up each scored component.
COMPONENT_FIELDS = {
    "facial": ("findings.facial",),
    "arm": ("findings.arm",),
    "speech": (
        "findings.speech_slurred",
        "findings.aphasia",
        "findings.aphasia.items_named",
        "findings.aphasia.command_performed",
        "findings.aphasia.mute_or_global",
    ),
    "eye": ("findings.eye",),
    "neglect": ("findings.neglect",),
}

#: Canonical findings that score a given value, used by misscore rewrites.
CANNED_FINDINGS: dict[str, dict[int, list[tuple[str, Any]]]] = {
    "facial": {
        0: [("findings.facial", "none")],
        1: [("findings.facial", "left_droop")],
    },
    "arm": {
        0: [("findings.arm", {"side": "none", "severity": "no_weakness"})],
        1: [("findings.arm", {"side": "left", "severity": "drifts_down"})],
        2: [
            (
                "findings.arm",
                {"side": "left", "severity": "falls_rapidly_or_no_effort"},
            )
        ],
    },
    "speech": {
        0: [
            ("findings.speech_slurred", False),
            (
                "findings.aphasia",
                {"items_named": 3, "command_performed": True, "mute_or_global": False},
            ),
        ],
        1: [
            ("findings.speech_slurred", True),
            (
                "findings.aphasia",
                {"items_named": 3, "command_performed": True, "mute_or_global": False},
            ),
        ],
        2: [
            ("findings.speech_slurred", True),
            (
                "findings.aphasia",
                {"items_named": 0, "command_performed": False, "mute_or_global": True},
            ),
        ],
    },
    "eye": {
        0: [("findings.eye", {"direction": "none", "severity": "none"})],
        1: [("findings.eye", {"direction": "left", "severity": "partial"})],
        2: [("findings.eye", {"direction": "left", "severity": "forced"})],
    },
    "neglect": {
        0: [
            (
                "findings.neglect",
                {"recognizes_weakness": True, "recognizes_own_arm": True},
            )
        ],
        1: [
            (
                "findings.neglect",
                {"recognizes_weakness": False, "recognizes_own_arm": True},
            )
        ],
        2: [
            (
                "findings.neglect",
                {"recognizes_weakness": False, "recognizes_own_arm": False},
            )
        ],
    },
}


class ScriptError(ValueError):
    """Schema violation, broken phase order, or an inapplicable fault."""


@dataclass
class FaultSpec:
    kind: str  # skip_component | misscore | hallucinate_field | garble_transcript
    component: Optional[str] = None
    wrong_value: Optional[int] = None
    field: Optional[str] = None
    value: Any = None
    turn_index: Optional[int] = None
    one_shot: bool = True

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "FaultSpec":
        kind = doc.get("kind")
        if kind not in ("skip_component", "misscore", "hallucinate_field", "garble_transcript"):
            raise ScriptError(f"unknown fault kind {kind!r}")
        return cls(
            kind=kind,
            component=doc.get("component"),
            wrong_value=doc.get("wrong_value"),
            field=doc.get("field"),
            value=doc.get("value"),
            turn_index=doc.get("turn_index"),
            one_shot=doc.get("one_shot", True),
        )

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"kind": self.kind}
        if self.component is not None:
            doc["component"] = self.component
        if self.wrong_value is not None:
            doc["wrong_value"] = self.wrong_value
        if self.field is not None:
            doc["field"] = self.field
        if self.value is not None or self.kind == "hallucinate_field":
            doc["value"] = self.value
        if self.turn_index is not None:
            doc["turn_index"] = self.turn_index
        return doc


@dataclass
class ScriptStep:
    expected_agent: AgentId
    matcher: list[str]
    assistant_text: str
    tool_calls: list[ToolCall] = field(default_factory=list)
    on_no_match: str = "reprompt"  # "reprompt" | "accept_any"
    user_text: str = ""  # canonical utterance, used by drivers and docs

    def matches(self, normalized_text: str) -> bool:
        if self.on_no_match == "accept_any" and not self.matcher:
            return True
        return all(keyword in normalized_text for keyword in self.matcher)


@dataclass
class ConversationScript:
    script_id: str
    opening: str
    steps: list[ScriptStep]
    faults: list[FaultSpec] = field(default_factory=list)
    #: Runtime faults (garbled turns) consumed during replay.
    garbled_turns: list[int] = field(default_factory=list)


def normalize_text(text: str) -> str:
    return re.sub(r"\s+", " ", text.lower()).strip()


def load_script(
    path: Union[str, Path], agent_table: Optional[AgentTable] = None
) -> ConversationScript:
    """Load and validate a script file against the agent graph."""
    raw = Path(path).read_text("utf-8")
    return parse_script(raw, agent_table=agent_table, source=str(path))


def load_bundled_script(
    name: str, agent_table: Optional[AgentTable] = None
) -> ConversationScript:
    raw = (
        resources.files("voicetriage.data.scripts")
        .joinpath(f"{name}.json")
        .read_text("utf-8")
    )
    return parse_script(raw, agent_table=agent_table, source=name)


def parse_script(
    raw: str, agent_table: Optional[AgentTable] = None, source: str = "<script>"
) -> ConversationScript:
    table = agent_table or load_agent_table()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ScriptError(f"{source}: not valid JSON: {exc}") from exc
    if doc.get("schema") != SCRIPT_SCHEMA:
        raise ScriptError(f"{source}: unsupported schema {doc.get('schema')!r}")
    if not doc.get("script_id"):
        raise ScriptError(f"{source}: missing script_id")

    steps_doc = doc.get("steps")
    if not steps_doc:
        raise ScriptError(f"{source}: steps list is empty")

    steps: list[ScriptStep] = []
    for idx, step_doc in enumerate(steps_doc):
        steps.append(_parse_step(step_doc, idx, source))

    script = ConversationScript(
        script_id=doc["script_id"],
        opening=doc.get("opening", ""),
        steps=steps,
        faults=[],
    )
    validate_script(script, table, source=source)
    # Faults authored into the file arm at load; the loaded script already
    # replays with them applied.
    for fault_doc in doc.get("faults", []):
        fault = FaultSpec.from_dict(fault_doc)
        script.faults.append(fault)
        _apply_fault(script, fault)
    if script.faults:
        validate_script(script, table, source=f"{source}+faults")
    return script


def _parse_step(doc: dict[str, Any], idx: int, source: str) -> ScriptStep:
    where = f"{source}: step {idx}"
    try:
        agent = AgentId(doc["expected_agent"])
    except (KeyError, ValueError) as exc:
        raise ScriptError(f"{where}: bad expected_agent: {exc}") from exc
    on_no_match = doc.get("on_no_match", "reprompt")
    if on_no_match not in ("reprompt", "accept_any"):
        raise ScriptError(f"{where}: bad on_no_match {on_no_match!r}")
    matcher = [normalize_text(k) for k in doc.get("matcher", [])]
    if not matcher and on_no_match != "accept_any":
        raise ScriptError(f"{where}: empty matcher requires accept_any")
    tool_calls = []
    for call_doc in doc.get("tool_calls", []):
        try:
            kind = ToolKind(call_doc["kind"])
        except (KeyError, ValueError) as exc:
            raise ScriptError(f"{where}: bad tool call: {exc}") from exc
        tool_calls.append(ToolCall(kind=kind, arguments=call_doc.get("arguments", {})))
    return ScriptStep(
        expected_agent=agent,
        matcher=matcher,
        assistant_text=doc.get("assistant_text", ""),
        tool_calls=tool_calls,
        on_no_match=on_no_match,
        user_text=doc.get("user_text", ""),
    )


def validate_script(
    script: ConversationScript, table: AgentTable, source: str = "<script>"
) -> None:
    """Phase order, tool permissions, and update-field sanity."""
    # Expected-agent sequence (consecutive repeats collapsed) must be a
    # subsequence of the canonical agent order.
    order = table.order()
    phases: list[AgentId] = []
    for step in script.steps:
        if not phases or phases[-1] != step.expected_agent:
            phases.append(step.expected_agent)
    pos = 0
    for phase_idx, phase in enumerate(phases):
        while pos < len(order) and order[pos] != phase:
            pos += 1
        if pos == len(order):
            raise ScriptError(
                f"{source}: step phase {phase.value!r} (phase {phase_idx}) out of "
                "order against the predefined agent flow"
            )
        pos += 1

    # Walk tool calls tracking the active agent through transfers; every
    # call must be permitted for the agent issuing it and each step must
    # be reached with its expected agent active.
    active = AgentId.MAIN
    for idx, step in enumerate(script.steps):
        if step.expected_agent != active:
            raise ScriptError(
                f"{source}: step {idx} expects agent {step.expected_agent.value!r} "
                f"but {active.value!r} would be active"
            )
        for call in step.tool_calls:
            if not table.allows_tool(active, call.kind):
                raise ScriptError(
                    f"{source}: step {idx} calls {call.kind.value} under agent "
                    f"{active.value}, which is not permitted"
                )
            if call.kind == ToolKind.UPDATE_ASSESSMENT_STATE:
                fld = call.arguments.get("field")
                if fld not in UPDATABLE_FIELDS:
                    raise ScriptError(
                        f"{source}: step {idx} updates unknown field {fld!r}"
                    )
            elif call.kind == ToolKind.TRANSFER_AGENT:
                try:
                    target = AgentId(call.arguments.get("target"))
                except ValueError as exc:
                    raise ScriptError(f"{source}: step {idx}: {exc}") from exc
                if not table.allows_transfer(active, target):
                    raise ScriptError(
                        f"{source}: step {idx} transfer {active.value} -> "
                        f"{target.value} breaks the predefined order"
                    )
                active = target
            elif call.kind == ToolKind.RUN_FINAL_ANALYSIS:
                # Analysis hands control back to the main agent.
                active = AgentId.MAIN


# --- fault injection ---------------------------------------------------------


def inject_fault(script: ConversationScript, fault: FaultSpec) -> ConversationScript:
    """Return a rewritten copy of the script with one fault armed; the
    original script is left untouched."""
    rewritten = copy.deepcopy(script)
    armed = copy.deepcopy(fault)
    rewritten.faults = rewritten.faults + [armed]
    _apply_fault(rewritten, armed)
    validate_script(rewritten, load_agent_table(), source=f"{script.script_id}+fault")
    return rewritten


def _apply_fault(script: ConversationScript, fault: FaultSpec) -> None:
    if fault.kind == "skip_component":
        _inject_skip(script, fault)
    elif fault.kind == "misscore":
        _inject_misscore(script, fault)
    elif fault.kind == "hallucinate_field":
        _inject_hallucination(script, fault)
    elif fault.kind == "garble_transcript":
        if not fault.turn_index or fault.turn_index < 1:
            raise ScriptError("garble_transcript requires a 1-based turn_index")
        script.garbled_turns.append(fault.turn_index)
    else:
        raise ScriptError(f"unknown fault kind {fault.kind!r}")


def _component_agent(fault: FaultSpec) -> AgentId:
    if fault.component not in COMPONENT_AGENT:
        raise ScriptError(f"fault references unknown component {fault.component!r}")
    return COMPONENT_AGENT[fault.component]


def _inject_skip(script: ConversationScript, fault: FaultSpec) -> None:
    agent = _component_agent(fault)
    indices = [i for i, s in enumerate(script.steps) if s.expected_agent == agent]
    if not indices:
        raise ScriptError(
            f"script {script.script_id} has no steps for component "
            f"{fault.component!r}"
        )
    first, last = indices[0], indices[-1]
    if first == 0:
        raise ScriptError("cannot skip the opening step")
    ask_step = script.steps[first - 1]
    skipped = script.steps[first : last + 1]
    # The agent is never prompted: the question that would have opened this
    # component is replaced by the next component's question, only the
    # transfer chain survives from the skipped steps, and a video gate for
    # the skipped exam never opens.
    ask_step.assistant_text = skipped[-1].assistant_text
    kept = [
        call
        for call in ask_step.tool_calls
        if not (
            call.kind == ToolKind.START_VIDEO_RECORDING
            and call.arguments.get("component") == fault.component
        )
    ]
    carried = [
        call
        for step in skipped
        for call in step.tool_calls
        if call.kind in (ToolKind.TRANSFER_AGENT, ToolKind.RUN_FINAL_ANALYSIS)
    ]
    ask_step.tool_calls = kept + carried
    del script.steps[first : last + 1]


def _inject_misscore(script: ConversationScript, fault: FaultSpec) -> None:
    if fault.component not in CANNED_FINDINGS:
        raise ScriptError(f"fault references unknown component {fault.component!r}")
    canned = CANNED_FINDINGS[fault.component].get(fault.wrong_value or 0)
    if canned is None:
        raise ScriptError(
            f"component {fault.component!r} cannot score {fault.wrong_value!r}"
        )
    cluster = set(COMPONENT_FIELDS[fault.component])
    sites: list[tuple[int, int]] = []
    for step_idx, step in enumerate(script.steps):
        for call_idx, call in enumerate(step.tool_calls):
            if (
                call.kind == ToolKind.UPDATE_ASSESSMENT_STATE
                and call.arguments.get("field") in cluster
            ):
                sites.append((step_idx, call_idx))
    if not sites:
        raise ScriptError(
            f"script {script.script_id} never records component {fault.component!r}"
        )
    last_step, last_call = sites[-1]
    replacement = [
        ToolCall(
            kind=ToolKind.UPDATE_ASSESSMENT_STATE,
            arguments={"field": fld, "value": copy.deepcopy(val)},
        )
        for fld, val in canned
    ]
    for step_idx, call_idx in reversed(sites):
        if step_idx == last_step and call_idx == last_call:
            script.steps[step_idx].tool_calls[call_idx : call_idx + 1] = replacement
        else:
            del script.steps[step_idx].tool_calls[call_idx]


def _inject_hallucination(script: ConversationScript, fault: FaultSpec) -> None:
    if fault.field not in UPDATABLE_FIELDS:
        raise ScriptError(f"fault references unknown field {fault.field!r}")
    for step in script.steps:
        for idx, call in enumerate(step.tool_calls):
            if (
                call.kind == ToolKind.TRANSFER_AGENT
                and call.arguments.get("target") == AgentId.FINAL_SUMMARY.value
            ):
                # Recorded just before the analysis hand-off, as a late
                # spurious write into the shared state.
                step.tool_calls.insert(
                    idx,
                    ToolCall(
                        kind=ToolKind.UPDATE_ASSESSMENT_STATE,
                        arguments={
                            "field": fault.field,
                            "value": copy.deepcopy(fault.value),
                        },
                    ),
                )
                return
    raise ScriptError(
        f"script {script.script_id} has no final-analysis hand-off to attach "
        "a hallucinated field to"
    )
