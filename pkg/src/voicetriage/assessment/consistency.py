"""Cross-field consistency rules applied at the end of an assessment.

Each rule yields at most one discrepancy per offending field so the check
is idempotent: running it twice over the same state returns the same list.
"""

from __future__ import annotations

from .model import (
    AssessmentState,
    ComponentScores,
    Discrepancy,
    DiscrepancyKind,
    KNOWN_ANTICOAGULANTS,
    TranscriptDigest,
    missing_fields,
)
from .scoring import score_fast_ed

SEX_FIELD = "demographics.sex"

# Fields whose absence at the end of a session is flagged individually
# (findings components are covered by missing_component instead).
_REQUIRED_FIELDS = (
    "demographics.age",
    "demographics.sex",
    "times.last_known_well_or_onset",
    "ancillary.anticoagulants",
    "ancillary.prior_stroke",
    "ancillary.glucose",
)


def check_consistency(
    state: AssessmentState, digest: TranscriptDigest
) -> list[Discrepancy]:
    """Run the full rule set; an empty result means consistent and complete."""
    found: list[Discrepancy] = []

    # Conflicting sex records across turns.
    sex_values = [str(v) for v in digest.values_for(SEX_FIELD)]
    if len(set(sex_values)) > 1:
        found.append(
            Discrepancy.of(
                DiscrepancyKind.SEX_MISMATCH,
                "sex recorded as " + " then ".join(sex_values),
            )
        )

    missing = missing_fields(state)

    # Skipped exam components.
    for name in ("facial", "arm", "speech", "eye", "neglect"):
        if f"findings.{name}" in missing:
            found.append(
                Discrepancy.of(
                    DiscrepancyKind.MISSING_COMPONENT,
                    f"component {name} never assessed",
                )
            )

    # Stored scores or claimed total diverging from the rubric applied to
    # the findings.
    recomputed = score_fast_ed(state.findings)
    stored_diverges = state.scores is not None and _scores_diverge(
        state.scores, recomputed
    )
    total_diverges = (
        state.recorded_total is not None
        and state.recorded_total != recomputed.partial_total
    )
    if stored_diverges or total_diverges:
        claimed = (
            state.recorded_total
            if total_diverges
            else state.scores.as_dict()  # type: ignore[union-attr]
        )
        found.append(
            Discrepancy.of(
                DiscrepancyKind.SCORE_SUM_MISMATCH,
                f"recorded scores {claimed} != rubric {recomputed.as_dict()} "
                f"(total {recomputed.partial_total})",
            )
        )

    # Neglect scored despite a normal arm exam.
    neglect = recomputed.neglect
    if neglect is not None and neglect > 0 and recomputed.arm == 0:
        found.append(
            Discrepancy.of(
                DiscrepancyKind.NEGLECT_WITHOUT_WEAKNESS,
                f"neglect scored {neglect} with no arm weakness recorded",
            )
        )

    # Last-known-well after symptom onset.
    lkw, onset = state.times.last_known_well, state.times.symptom_onset
    if lkw is not None and onset is not None and lkw > onset:
        found.append(
            Discrepancy.of(
                DiscrepancyKind.TIME_ORDER_VIOLATION,
                f"last known well {lkw:%Y-%m-%dT%H:%MZ} after symptom onset "
                f"{onset:%Y-%m-%dT%H:%MZ}",
            )
        )

    # Anticoagulants outside the closed inquiry list.
    for drug in state.ancillary.anticoagulants or ():
        if drug not in KNOWN_ANTICOAGULANTS:
            found.append(
                Discrepancy.of(
                    DiscrepancyKind.UNKNOWN_ANTICOAGULANT,
                    f"recorded anticoagulant {drug!r} not in the inquiry list",
                )
            )

    # Required non-component fields never collected.
    for field_id in _REQUIRED_FIELDS:
        if field_id in missing:
            found.append(
                Discrepancy.of(
                    DiscrepancyKind.MISSING_REQUIRED_FIELD,
                    f"{field_id} never recorded",
                )
            )

    return found


def _scores_diverge(stored: ComponentScores, recomputed: ComponentScores) -> bool:
    return any(
        stored_v is not None and stored_v != recomputed_v
        for stored_v, recomputed_v in zip(
            stored.as_dict().values(), recomputed.as_dict().values()
        )
    )
