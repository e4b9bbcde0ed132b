"""Domain model for the guided stroke assessment.

Everything collected during a session lands in an :class:`AssessmentState`.
The model follows two rules that matter clinically:

1. Unassessed and normal are distinct for every finding. ``None`` always
   means "never recorded"; a normal exam result is an explicit value.
   A skipped component must survive into the final report as skipped.
2. Recorded values are never silently rejected. The conversation layer may
   write contradictory or out-of-range data (that is exactly what the
   consistency checker exists to catch), so setters validate structure,
   not plausibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Optional


class Sex(str, Enum):
    MALE = "male"
    FEMALE = "female"
    UNKNOWN = "unknown"


class FacialFinding(str, Enum):
    NONE = "none"
    LEFT_DROOP = "left_droop"
    RIGHT_DROOP = "right_droop"


class ArmSide(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    BOTH = "both"
    NONE = "none"


class ArmSeverity(str, Enum):
    NO_WEAKNESS = "no_weakness"
    DRIFTS_DOWN = "drifts_down"
    FALLS_RAPIDLY_OR_NO_EFFORT = "falls_rapidly_or_no_effort"


class EyeDirection(str, Enum):
    NONE = "none"
    LEFT = "left"
    RIGHT = "right"


class EyeSeverity(str, Enum):
    NONE = "none"
    PARTIAL = "partial"
    FORCED = "forced"


class PriorStroke(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


#: Closed set of anticoagulants the inquiry covers. Anything recorded
#: outside this set is preserved but flagged by the consistency checker.
KNOWN_ANTICOAGULANTS = (
    "warfarin",
    "dabigatran",
    "apixaban",
    "rivaroxaban",
    "edoxaban",
    "heparin_enoxaparin",
)

GLUCOSE_MIN = 10
GLUCOSE_MAX = 1000
AGE_MIN = 0
AGE_MAX = 130


class ModelError(ValueError):
    """Structurally invalid value for a domain field."""


@dataclass
class Demographics:
    age: Optional[int] = None
    sex: Sex = Sex.UNKNOWN


@dataclass
class TimeAnchors:
    last_known_well: Optional[datetime] = None
    symptom_onset: Optional[datetime] = None
    onset_witnessed: Optional[bool] = None


@dataclass
class ArmFinding:
    side: ArmSide
    severity: ArmSeverity


@dataclass
class AphasiaFinding:
    """Naming / command-following probe results.

    Sub-fields may be filled across several turns, so each is optional
    until recorded. The component counts as assessed only once all three
    are known.
    """

    items_named: Optional[int] = None
    command_performed: Optional[bool] = None
    mute_or_global: Optional[bool] = None

    def complete(self) -> bool:
        return (
            self.items_named is not None
            and self.command_performed is not None
            and self.mute_or_global is not None
        )


@dataclass
class EyeFinding:
    direction: EyeDirection
    severity: EyeSeverity

    def __post_init__(self) -> None:
        none_dir = self.direction == EyeDirection.NONE
        none_sev = self.severity == EyeSeverity.NONE
        if none_dir != none_sev:
            raise ModelError(
                f"eye deviation direction {self.direction.value!r} inconsistent "
                f"with severity {self.severity.value!r}"
            )


@dataclass
class NeglectFinding:
    recognizes_weakness: bool
    recognizes_own_arm: bool


@dataclass
class FastEdFindings:
    facial: Optional[FacialFinding] = None
    arm: Optional[ArmFinding] = None
    speech_slurred: Optional[bool] = None
    aphasia: Optional[AphasiaFinding] = None
    eye: Optional[EyeFinding] = None
    neglect: Optional[NeglectFinding] = None

    def speech_assessed(self) -> bool:
        return (
            self.speech_slurred is not None
            and self.aphasia is not None
            and self.aphasia.complete()
        )


COMPONENTS = ("facial", "arm", "speech", "eye", "neglect")


@dataclass
class ComponentScores:
    """Per-component rubric scores; ``None`` marks an unassessed component."""

    facial: Optional[int] = None
    arm: Optional[int] = None
    speech: Optional[int] = None
    eye: Optional[int] = None
    neglect: Optional[int] = None

    def as_dict(self) -> dict[str, Optional[int]]:
        return {name: getattr(self, name) for name in COMPONENTS}

    def assessed(self) -> dict[str, int]:
        return {k: v for k, v in self.as_dict().items() if v is not None}

    @property
    def incomplete(self) -> bool:
        return any(v is None for v in self.as_dict().values())

    @property
    def partial_total(self) -> int:
        """Sum over the assessed components only."""
        return sum(self.assessed().values())

    @property
    def total(self) -> Optional[int]:
        """Full total, or ``None`` while any component is unassessed."""
        return None if self.incomplete else self.partial_total


@dataclass
class GlucoseReading:
    value_mg_dl: Optional[int] = None
    unmeasurable: bool = False


@dataclass
class AncillaryData:
    #: ``None`` = never asked; ``[]`` = asked, none reported.
    anticoagulants: Optional[list[str]] = None
    last_dose_time: Optional[datetime] = None
    prior_stroke: Optional[PriorStroke] = None
    prior_stroke_detail: Optional[str] = None
    glucose: Optional[GlucoseReading] = None


@dataclass
class VideoRef:
    component: str  # "facial" | "arm"
    video_id: str
    duration_s: float
    uri: str


class DiscrepancyKind(str, Enum):
    SEX_MISMATCH = "sex_mismatch"
    MISSING_COMPONENT = "missing_component"
    SCORE_SUM_MISMATCH = "score_sum_mismatch"
    NEGLECT_WITHOUT_WEAKNESS = "neglect_without_weakness"
    TIME_ORDER_VIOLATION = "time_order_violation"
    UNKNOWN_ANTICOAGULANT = "unknown_anticoagulant"
    MISSING_REQUIRED_FIELD = "missing_required_field"


class Resolution(str, Enum):
    CLARIFY_WITH_USER = "clarify_with_user"
    AUTO_CORRECT = "auto_correct"
    FLAG_ONLY = "flag_only"


#: Fixed resolution per discrepancy kind. Only a recorded-value conflict is
#: worth interrupting the caller for; arithmetic is fixed silently and the
#: rest is surfaced on the report for the reviewing clinician.
RESOLUTION_FOR_KIND = {
    DiscrepancyKind.SEX_MISMATCH: Resolution.CLARIFY_WITH_USER,
    DiscrepancyKind.MISSING_COMPONENT: Resolution.FLAG_ONLY,
    DiscrepancyKind.SCORE_SUM_MISMATCH: Resolution.AUTO_CORRECT,
    DiscrepancyKind.NEGLECT_WITHOUT_WEAKNESS: Resolution.FLAG_ONLY,
    DiscrepancyKind.TIME_ORDER_VIOLATION: Resolution.FLAG_ONLY,
    DiscrepancyKind.UNKNOWN_ANTICOAGULANT: Resolution.FLAG_ONLY,
    DiscrepancyKind.MISSING_REQUIRED_FIELD: Resolution.FLAG_ONLY,
}


@dataclass
class Discrepancy:
    kind: DiscrepancyKind
    detail: str
    resolution: Resolution

    @classmethod
    def of(cls, kind: DiscrepancyKind, detail: str) -> "Discrepancy":
        return cls(kind=kind, detail=detail, resolution=RESOLUTION_FOR_KIND[kind])


@dataclass
class TranscriptTurn:
    speaker: str  # "user" | "assistant" | "system"
    text: str
    timestamp: datetime


@dataclass
class TranscriptDigest:
    """What the consistency checker needs to know about the conversation:

    every raw value ever written per field path, in write order. The state
    holds only the latest value; conflicting writes are visible here.
    """

    field_writes: dict[str, list[Any]] = field(default_factory=dict)
    turn_count: int = 0

    def record(self, field_path: str, value: Any) -> None:
        self.field_writes.setdefault(field_path, []).append(value)

    def values_for(self, field_path: str) -> list[Any]:
        return list(self.field_writes.get(field_path, ()))

    def clear_field(self, field_path: str) -> None:
        self.field_writes.pop(field_path, None)


@dataclass
class AssessmentState:
    demographics: Demographics = field(default_factory=Demographics)
    times: TimeAnchors = field(default_factory=TimeAnchors)
    findings: FastEdFindings = field(default_factory=FastEdFindings)
    #: Scores as recorded by the conversation layer. May drift from the
    #: rubric mid-session; the final analysis recomputes and overwrites.
    scores: Optional[ComponentScores] = None
    #: Total as claimed by the conversation layer, kept separate from the
    #: derived total so a wrong claim is detectable and correctable.
    recorded_total: Optional[int] = None
    ancillary: AncillaryData = field(default_factory=AncillaryData)
    stroke_likely: Optional[bool] = None
    lvo_likely: Optional[bool] = None
    videos: list[VideoRef] = field(default_factory=list)
    summary_narrative: Optional[str] = None


def missing_fields(state: AssessmentState) -> list[str]:
    """Identifiers of everything the assessment still lacks, in schema order."""
    missing: list[str] = []
    if state.demographics.age is None:
        missing.append("demographics.age")
    if state.demographics.sex == Sex.UNKNOWN:
        missing.append("demographics.sex")
    if state.times.last_known_well is None and state.times.symptom_onset is None:
        missing.append("times.last_known_well_or_onset")
    f = state.findings
    if f.facial is None:
        missing.append("findings.facial")
    if f.arm is None:
        missing.append("findings.arm")
    if not f.speech_assessed():
        missing.append("findings.speech")
    if f.eye is None:
        missing.append("findings.eye")
    if f.neglect is None:
        missing.append("findings.neglect")
    if state.ancillary.anticoagulants is None:
        missing.append("ancillary.anticoagulants")
    if state.ancillary.prior_stroke is None:
        missing.append("ancillary.prior_stroke")
    if state.ancillary.glucose is None:
        missing.append("ancillary.glucose")
    return missing
