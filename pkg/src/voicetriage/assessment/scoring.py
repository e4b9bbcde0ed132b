"""Rubric scoring and the binary stroke / LVO classification rules.

Point values follow the published five-component field triage scale:
facial palsy 0-1, arm weakness 0-2, speech 0-2, eye deviation 0-2,
denial/neglect 0-2, total 0-9. A total of four or more points flags a
likely large vessel occlusion; any nonzero component flags a likely
stroke.
"""

from __future__ import annotations

from typing import Optional

from .model import (
    AphasiaFinding,
    ArmFinding,
    ArmSeverity,
    AssessmentState,
    ComponentScores,
    EyeFinding,
    EyeSeverity,
    FacialFinding,
    FastEdFindings,
    NeglectFinding,
)

LVO_THRESHOLD = 4
MAX_TOTAL = 9

SCORE_RANGES = {"facial": 1, "arm": 2, "speech": 2, "eye": 2, "neglect": 2}


def score_facial(finding: Optional[FacialFinding]) -> Optional[int]:
    if finding is None:
        return None
    return 0 if finding == FacialFinding.NONE else 1


def score_arm(finding: Optional[ArmFinding]) -> Optional[int]:
    if finding is None:
        return None
    return {
        ArmSeverity.NO_WEAKNESS: 0,
        ArmSeverity.DRIFTS_DOWN: 1,
        ArmSeverity.FALLS_RAPIDLY_OR_NO_EFFORT: 2,
    }[finding.severity]


def score_speech(
    slurred: Optional[bool], aphasia: Optional[AphasiaFinding]
) -> Optional[int]:
    """One combined 0-2 speech score covering dysarthria and aphasia probes.

    2: mute / global aphasia, or unable to name any item.
    1: slurred speech, names only 1-2 items, or fails the simple command.
    0: clear speech, names all three, performs the command.
    """
    if slurred is None or aphasia is None or not aphasia.complete():
        return None
    if aphasia.mute_or_global or aphasia.items_named == 0:
        return 2
    if slurred or aphasia.items_named < 3 or not aphasia.command_performed:
        return 1
    return 0


def score_eye(finding: Optional[EyeFinding]) -> Optional[int]:
    if finding is None:
        return None
    return {
        EyeSeverity.NONE: 0,
        EyeSeverity.PARTIAL: 1,
        EyeSeverity.FORCED: 2,
    }[finding.severity]


def score_neglect(finding: Optional[NeglectFinding]) -> Optional[int]:
    if finding is None:
        return None
    return int(not finding.recognizes_weakness) + int(not finding.recognizes_own_arm)


def score_fast_ed(findings: FastEdFindings) -> ComponentScores:
    """Map exam findings to rubric scores. Unassessed findings map to
    unassessed scores and make the total incomplete."""
    return ComponentScores(
        facial=score_facial(findings.facial),
        arm=score_arm(findings.arm),
        speech=score_speech(findings.speech_slurred, findings.aphasia),
        eye=score_eye(findings.eye),
        neglect=score_neglect(findings.neglect),
    )


def total_score(scores: ComponentScores) -> Optional[int]:
    """Arithmetic total of the assessed components, or ``None`` while any
    component is unassessed (the partial sum stays available on the
    scores object)."""
    return scores.total


def classify_lvo(scores: ComponentScores) -> bool:
    """Likely large vessel occlusion at total >= 4.

    Incomplete assessments are classified on the partial sum; the missing
    component is reported separately, never hidden.
    """
    return scores.partial_total >= LVO_THRESHOLD


def classify_stroke_scores(scores: ComponentScores) -> bool:
    """Likely stroke iff any assessed component scored above zero."""
    return any(v > 0 for v in scores.assessed().values())


def classify_stroke(state: AssessmentState) -> bool:
    return classify_stroke_scores(score_fast_ed(state.findings))
