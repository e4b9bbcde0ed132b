"""Rubric scoring, totals, and the stroke/LVO classification rules."""

import itertools

import pytest
from hypothesis import given, strategies as st

from voicetriage.assessment import (
    AphasiaFinding,
    ArmFinding,
    ArmSeverity,
    ArmSide,
    AssessmentState,
    ComponentScores,
    EyeDirection,
    EyeFinding,
    EyeSeverity,
    FacialFinding,
    FastEdFindings,
    ModelError,
    NeglectFinding,
    classify_lvo,
    classify_stroke,
    classify_stroke_scores,
    score_fast_ed,
    total_score,
)


def table1_findings():
    return FastEdFindings(
        facial=FacialFinding.LEFT_DROOP,
        arm=ArmFinding(ArmSide.LEFT, ArmSeverity.FALLS_RAPIDLY_OR_NO_EFFORT),
        speech_slurred=True,
        aphasia=AphasiaFinding(items_named=3, command_performed=True, mute_or_global=False),
        eye=EyeFinding(EyeDirection.NONE, EyeSeverity.NONE),
        neglect=NeglectFinding(recognizes_weakness=False, recognizes_own_arm=False),
    )


def all_normal_findings():
    return FastEdFindings(
        facial=FacialFinding.NONE,
        arm=ArmFinding(ArmSide.NONE, ArmSeverity.NO_WEAKNESS),
        speech_slurred=False,
        aphasia=AphasiaFinding(items_named=3, command_performed=True, mute_or_global=False),
        eye=EyeFinding(EyeDirection.NONE, EyeSeverity.NONE),
        neglect=NeglectFinding(recognizes_weakness=True, recognizes_own_arm=True),
    )


def maximal_findings():
    return FastEdFindings(
        facial=FacialFinding.RIGHT_DROOP,
        arm=ArmFinding(ArmSide.BOTH, ArmSeverity.FALLS_RAPIDLY_OR_NO_EFFORT),
        speech_slurred=True,
        aphasia=AphasiaFinding(items_named=0, command_performed=False, mute_or_global=True),
        eye=EyeFinding(EyeDirection.LEFT, EyeSeverity.FORCED),
        neglect=NeglectFinding(recognizes_weakness=False, recognizes_own_arm=False),
    )


def test_table1_scoring():
    scores = score_fast_ed(table1_findings())
    assert scores.as_dict() == {"facial": 1, "arm": 2, "speech": 1, "eye": 0, "neglect": 2}
    assert total_score(scores) == 6


def test_all_normal_scores_zero():
    scores = score_fast_ed(all_normal_findings())
    assert scores.as_dict() == {"facial": 0, "arm": 0, "speech": 0, "eye": 0, "neglect": 0}
    assert total_score(scores) == 0


def test_maximal_scores_nine():
    scores = score_fast_ed(maximal_findings())
    assert scores.as_dict() == {"facial": 1, "arm": 2, "speech": 2, "eye": 2, "neglect": 2}
    assert total_score(scores) == 9


def test_unassessed_neglect_makes_total_incomplete():
    findings = table1_findings()
    findings.neglect = None
    scores = score_fast_ed(findings)
    assert scores.neglect is None
    assert total_score(scores) is None
    assert scores.incomplete
    assert scores.partial_total == 4


def test_total_score_sum_example():
    scores = ComponentScores(facial=1, arm=2, speech=1, eye=0, neglect=2)
    assert total_score(scores) == 6


def test_speech_rubric_edges():
    # names 0 items scores 2 even when not mute
    f = all_normal_findings()
    f.aphasia = AphasiaFinding(items_named=0, command_performed=True, mute_or_global=False)
    assert score_fast_ed(f).speech == 2
    # names 1-2 items scores 1
    f.aphasia = AphasiaFinding(items_named=2, command_performed=True, mute_or_global=False)
    assert score_fast_ed(f).speech == 1
    # failed command alone scores 1
    f.aphasia = AphasiaFinding(items_named=3, command_performed=False, mute_or_global=False)
    assert score_fast_ed(f).speech == 1
    # incomplete aphasia probes leave speech unassessed
    f.aphasia = AphasiaFinding(items_named=3)
    assert score_fast_ed(f).speech is None


def test_eye_direction_severity_must_agree():
    with pytest.raises(ModelError):
        EyeFinding(EyeDirection.LEFT, EyeSeverity.NONE)
    with pytest.raises(ModelError):
        EyeFinding(EyeDirection.NONE, EyeSeverity.FORCED)


def test_lvo_threshold_boundary():
    assert not classify_lvo(ComponentScores(facial=1, arm=1, speech=1, eye=0, neglect=0))
    assert classify_lvo(ComponentScores(facial=1, arm=1, speech=1, eye=1, neglect=0))
    assert not classify_lvo(ComponentScores(facial=0, arm=0, speech=0, eye=0, neglect=0))


def test_lvo_incomplete_uses_partial_sum():
    scores = ComponentScores(facial=1, arm=1, speech=1, eye=0, neglect=None)
    assert not classify_lvo(scores)
    scores = ComponentScores(facial=1, arm=2, speech=1, eye=0, neglect=None)
    assert classify_lvo(scores)


def test_stroke_rule():
    state = AssessmentState(findings=table1_findings())
    assert classify_stroke(state)
    state = AssessmentState(findings=all_normal_findings())
    assert not classify_stroke(state)
    # isolated facial droop still flags a stroke
    f = all_normal_findings()
    f.facial = FacialFinding.LEFT_DROOP
    assert classify_stroke(AssessmentState(findings=f))


# --- properties ---------------------------------------------------------


def enumerate_findings():
    """The full cross product of assessed findings states (plus the
    unassessed neglect state)."""
    arms = [
        ArmFinding(side, severity)
        for side in ArmSide
        for severity in ArmSeverity
    ]
    aphasias = [
        AphasiaFinding(items, cmd, mute)
        for items in range(4)
        for cmd in (False, True)
        for mute in (False, True)
    ]
    eyes = [EyeFinding(EyeDirection.NONE, EyeSeverity.NONE)] + [
        EyeFinding(direction, severity)
        for direction in (EyeDirection.LEFT, EyeDirection.RIGHT)
        for severity in (EyeSeverity.PARTIAL, EyeSeverity.FORCED)
    ]
    neglects = [None] + [
        NeglectFinding(w, a) for w in (False, True) for a in (False, True)
    ]
    for facial, arm, slurred, aphasia, eye, neglect in itertools.product(
        FacialFinding, arms, (False, True), aphasias, eyes, neglects
    ):
        yield FastEdFindings(
            facial=facial,
            arm=arm,
            speech_slurred=slurred,
            aphasia=aphasia,
            eye=eye,
            neglect=neglect,
        )


def test_total_equals_sum_of_component_lookups_exhaustive():
    """Brute-force: the total always equals the sum of the five
    independent per-component scores, within range, over every findings
    combination."""
    count = 0
    for findings in enumerate_findings():
        scores = score_fast_ed(findings)
        d = scores.as_dict()
        assert 0 <= d["facial"] <= 1
        for name in ("arm", "speech", "eye"):
            assert 0 <= d[name] <= 2
        if findings.neglect is None:
            assert d["neglect"] is None
            assert total_score(scores) is None
        else:
            assert 0 <= d["neglect"] <= 2
            assert total_score(scores) == sum(d.values())
            assert 0 <= total_score(scores) <= 9
        count += 1
    assert count == 3 * 12 * 2 * 16 * 5 * 5


@given(total=st.integers(min_value=0, max_value=9), bump=st.integers(min_value=0, max_value=9))
def test_lvo_monotone_in_total(total, bump):
    def scores_for(t):
        parts = [0, 0, 0, 0, 0]
        caps = [1, 2, 2, 2, 2]
        i = 0
        while t > 0:
            take = min(t, caps[i] - parts[i])
            parts[i] += take
            t -= take
            i += 1
        return ComponentScores(*parts)

    higher = min(9, total + bump)
    if classify_lvo(scores_for(total)):
        assert classify_lvo(scores_for(higher))


@given(st.data())
def test_stroke_equals_total_positive(data):
    findings = FastEdFindings(
        facial=data.draw(st.sampled_from(list(FacialFinding))),
        arm=ArmFinding(
            data.draw(st.sampled_from(list(ArmSide))),
            data.draw(st.sampled_from(list(ArmSeverity))),
        ),
        speech_slurred=data.draw(st.booleans()),
        aphasia=AphasiaFinding(
            items_named=data.draw(st.integers(0, 3)),
            command_performed=data.draw(st.booleans()),
            mute_or_global=data.draw(st.booleans()),
        ),
        eye=data.draw(
            st.sampled_from(
                [EyeFinding(EyeDirection.NONE, EyeSeverity.NONE)]
                + [
                    EyeFinding(d, s)
                    for d in (EyeDirection.LEFT, EyeDirection.RIGHT)
                    for s in (EyeSeverity.PARTIAL, EyeSeverity.FORCED)
                ]
            )
        ),
        neglect=NeglectFinding(data.draw(st.booleans()), data.draw(st.booleans())),
    )
    scores = score_fast_ed(findings)
    assert classify_stroke_scores(scores) == (total_score(scores) > 0)
