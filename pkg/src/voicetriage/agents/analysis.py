"""End-of-assessment analysis: score recheck, classification, narrative.

The default analyzer is fully deterministic. A reasoning-model analyzer
can be plugged in behind the same callable signature, but corrected
scores always come from the rubric recomputation, never free-form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Protocol

from ..assessment import (
    AssessmentState,
    ComponentScores,
    Discrepancy,
    DiscrepancyKind,
    EyeDirection,
    FacialFinding,
    Resolution,
    TranscriptDigest,
    check_consistency,
    classify_lvo,
    classify_stroke_scores,
    score_fast_ed,
)
from ..assessment.scoring import MAX_TOTAL

#: Discrepancy kind -> state field the main agent should clarify.
CLARIFIABLE_FIELDS = {
    DiscrepancyKind.SEX_MISMATCH: "demographics.sex",
}

CLARIFICATION_PROMPTS = {
    "demographics.sex": (
        "I need to clarify one thing: Is the patient male or female? "
        "I have a discrepancy in the records."
    ),
}


@dataclass
class AnalysisResult:
    corrected_scores: ComponentScores
    stroke_likely: bool
    lvo_likely: bool
    discrepancies: list[Discrepancy]
    clarifications_needed: list[str] = field(default_factory=list)
    narrative: Optional[str] = None


class Analyzer(Protocol):
    def __call__(
        self,
        state: AssessmentState,
        digest: TranscriptDigest,
        *,
        allow_clarification: bool,
    ) -> AnalysisResult: ...


def analyze(
    state: AssessmentState,
    digest: TranscriptDigest,
    *,
    allow_clarification: bool = True,
) -> AnalysisResult:
    """Deterministic analyzer: recompute, cross-check, classify, draft.

    When clarification is still allowed and a clarifiable conflict exists,
    the result carries the field list and no narrative; otherwise those
    conflicts are downgraded to flag-only and the narrative is drafted.
    """
    corrected = score_fast_ed(state.findings)
    discrepancies = check_consistency(state, digest)

    clarifications: list[str] = []
    for d in discrepancies:
        if d.resolution != Resolution.CLARIFY_WITH_USER:
            continue
        if allow_clarification:
            fld = CLARIFIABLE_FIELDS.get(d.kind)
            if fld is not None and fld not in clarifications:
                clarifications.append(fld)
        else:
            d.resolution = Resolution.FLAG_ONLY

    stroke = classify_stroke_scores(corrected)
    lvo = classify_lvo(corrected)
    result = AnalysisResult(
        corrected_scores=corrected,
        stroke_likely=stroke,
        lvo_likely=lvo,
        discrepancies=discrepancies,
        clarifications_needed=clarifications,
    )
    if not clarifications:
        result.narrative = draft_narrative(state, corrected, stroke, lvo)
    return result


def abnormal_findings(state: AssessmentState) -> list[str]:
    """Plain-language names for every abnormal exam finding, report order."""
    f = state.findings
    names: list[str] = []
    if f.facial == FacialFinding.LEFT_DROOP:
        names.append("left facial droop")
    elif f.facial == FacialFinding.RIGHT_DROOP:
        names.append("right facial droop")
    if f.arm is not None and f.arm.severity.value != "no_weakness":
        side = f.arm.side.value
        names.append(f"{side} arm weakness" if side != "none" else "arm weakness")
    if f.speech_slurred:
        names.append("slurred speech")
    if f.aphasia is not None and f.aphasia.complete():
        if (
            f.aphasia.mute_or_global
            or f.aphasia.items_named < 3
            or not f.aphasia.command_performed
        ):
            names.append("aphasia")
    if f.eye is not None and f.eye.direction != EyeDirection.NONE:
        names.append(f"eye deviation to the {f.eye.direction.value}")
    if f.neglect is not None and (
        not f.neglect.recognizes_weakness or not f.neglect.recognizes_own_arm
    ):
        names.append("neglect")
    return names


def draft_narrative(
    state: AssessmentState,
    scores: ComponentScores,
    stroke_likely: bool,
    lvo_likely: bool,
) -> str:
    if scores.incomplete:
        score_phrase = (
            f"The FAST-ED score is at least {scores.partial_total} out of "
            f"{MAX_TOTAL}, with one or more components not assessed."
        )
    else:
        score_phrase = f"The FAST-ED score is {scores.total} out of {MAX_TOTAL}."

    if stroke_likely and lvo_likely:
        head = (
            "The assessment indicates that a stroke is likely, and there is a "
            "high likelihood of a large vessel occlusion (LVO)."
        )
    elif stroke_likely:
        head = (
            "The assessment indicates that a stroke is likely; a large vessel "
            "occlusion is not suggested by the score."
        )
    else:
        head = "The assessment indicates that a stroke is unlikely."

    abnormal = abnormal_findings(state)
    if abnormal:
        findings_phrase = " Abnormal findings include " + ", ".join(abnormal) + "."
    else:
        findings_phrase = " No abnormal findings were recorded."

    closing = (
        " If you have not already, you need to call 911 as soon as possible "
        "and indicate a possible stroke."
        if stroke_likely
        else " Seek medical evaluation to investigate the symptoms."
    )
    return head + " " + score_phrase + findings_phrase + closing
