"""Scenario fixtures (schema ``voice-scenario/1``).

A scenario bundles a conversation script, the fault specs encoding that
case's assistant errors, the caller's clarification answers, and the
neurologist-style ground truth the run is judged against. Ground-truth
scores must agree with the rubric applied to the ground-truth findings;
a fixture that disagrees with itself refuses to load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from ..agents import AgentTable, load_agent_table
from ..assessment import (
    AphasiaFinding,
    ArmFinding,
    ArmSeverity,
    ArmSide,
    EyeDirection,
    EyeFinding,
    EyeSeverity,
    FacialFinding,
    FastEdFindings,
    NeglectFinding,
    score_fast_ed,
)
from ..scripted import ConversationScript, FaultSpec, inject_fault, load_bundled_script, load_script

SCENARIO_SCHEMA = "voice-scenario/1"


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    scenario_id: str
    description: str
    script_ref: str
    ground_truth: dict[str, Any]
    faults: list[FaultSpec] = field(default_factory=list)
    clarification_answers: dict[str, str] = field(default_factory=dict)
    user_confidence: Optional[int] = None
    synthetic: bool = True
    base_dir: Optional[Path] = None

    @property
    def stroke_true(self) -> bool:
        return bool(self.ground_truth["stroke"])

    @property
    def lvo_true(self) -> bool:
        return bool(self.ground_truth["lvo"])

    @property
    def mimic_kind(self) -> Optional[str]:
        return self.ground_truth.get("mimic_kind")

    def load_script(self, agent_table: Optional[AgentTable] = None) -> ConversationScript:
        """The scenario's script with every scenario fault applied."""
        table = agent_table or load_agent_table()
        if "/" in self.script_ref or self.script_ref.endswith(".json"):
            base = self.base_dir or Path(".")
            script = load_script(base / self.script_ref, table)
        else:
            script = load_bundled_script(self.script_ref, table)
        for fault in self.faults:
            script = inject_fault(script, fault)
        return script


def findings_from_dict(doc: dict[str, Any]) -> FastEdFindings:
    findings = FastEdFindings()
    if doc.get("facial") is not None:
        findings.facial = FacialFinding(doc["facial"])
    if doc.get("arm") is not None:
        findings.arm = ArmFinding(
            side=ArmSide(doc["arm"]["side"]), severity=ArmSeverity(doc["arm"]["severity"])
        )
    if doc.get("speech_slurred") is not None:
        findings.speech_slurred = bool(doc["speech_slurred"])
    if doc.get("aphasia") is not None:
        a = doc["aphasia"]
        findings.aphasia = AphasiaFinding(
            items_named=a["items_named"],
            command_performed=a["command_performed"],
            mute_or_global=a.get("mute_or_global", False),
        )
    if doc.get("eye") is not None:
        findings.eye = EyeFinding(
            direction=EyeDirection(doc["eye"]["direction"]),
            severity=EyeSeverity(doc["eye"]["severity"]),
        )
    if doc.get("neglect") is not None:
        n = doc["neglect"]
        findings.neglect = NeglectFinding(
            recognizes_weakness=n["recognizes_weakness"],
            recognizes_own_arm=n["recognizes_own_arm"],
        )
    return findings


def parse_scenario(doc: dict[str, Any], base_dir: Optional[Path] = None) -> Scenario:
    if doc.get("schema") != SCENARIO_SCHEMA:
        raise ScenarioError(f"unsupported scenario schema {doc.get('schema')!r}")
    scenario_id = doc.get("scenario_id")
    if not scenario_id:
        raise ScenarioError("scenario_id is required")
    gt = doc.get("ground_truth")
    if not isinstance(gt, dict):
        raise ScenarioError(f"{scenario_id}: ground_truth is required")

    # The fixture's stated scores must equal the rubric applied to its
    # stated findings; anything else is a corrupt fixture.
    findings = findings_from_dict(gt.get("findings", {}))
    recomputed = score_fast_ed(findings)
    stated = gt.get("component_scores", {})
    for name, value in recomputed.as_dict().items():
        if stated.get(name) != value:
            raise ScenarioError(
                f"{scenario_id}: ground-truth {name} score {stated.get(name)!r} "
                f"disagrees with the rubric value {value!r}"
            )
    if gt.get("total") != recomputed.total:
        raise ScenarioError(
            f"{scenario_id}: ground-truth total {gt.get('total')!r} disagrees "
            f"with the rubric total {recomputed.total!r}"
        )

    return Scenario(
        scenario_id=scenario_id,
        description=doc.get("description", ""),
        script_ref=doc.get("script", scenario_id),
        ground_truth=gt,
        faults=[FaultSpec.from_dict(f) for f in doc.get("faults", [])],
        clarification_answers=dict(doc.get("clarification_answers", {})),
        user_confidence=doc.get("user_confidence"),
        synthetic=doc.get("synthetic", True),
        base_dir=base_dir,
    )


def load_scenarios(directory: Optional[Union[str, Path]] = None) -> list[Scenario]:
    """All scenarios from a fixtures directory (bundled set by default),
    ordered by scenario_id."""
    scenarios: list[Scenario] = []
    if directory is None:
        root = resources.files("voicetriage.data.scenarios")
        entries = sorted(
            (e for e in root.iterdir() if e.name.endswith(".json")),
            key=lambda e: e.name,
        )
        for entry in entries:
            doc = json.loads(entry.read_text("utf-8"))
            scenarios.append(parse_scenario(doc, base_dir=None))
    else:
        base = Path(directory)
        if not base.is_dir():
            raise ScenarioError(f"fixtures directory {base} does not exist")
        for path in sorted(base.glob("*.json")):
            doc = json.loads(path.read_text("utf-8"))
            scenarios.append(parse_scenario(doc, base_dir=base))
    if not scenarios:
        raise ScenarioError("no scenario fixtures found")
    scenarios.sort(key=lambda s: s.scenario_id)
    return scenarios


def load_survey() -> list[int]:
    """Bundled post-study ease-of-use ratings."""
    doc = json.loads(
        resources.files("voicetriage.data").joinpath("survey.json").read_text("utf-8")
    )
    return list(doc["ease_of_voice_interaction"])
