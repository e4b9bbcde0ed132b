"""Metric operations: concordance, confusion, deltas, timing, Likert."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from voicetriage.harness import (
    CaseResult,
    component_concordance,
    confusion_metrics,
    likert_summary,
    percent,
    timing_stats,
    total_score_deltas,
)


def case(scenario_id="c", *, stroke=(True, True), lvo=(False, False),
         matches=None, delta=0, incomplete=False):
    matches = matches if matches is not None else dict.fromkeys(
        ("facial", "arm", "speech", "eye", "neglect"), True
    )
    return CaseResult(
        scenario_id=scenario_id,
        component_match=matches,
        total_delta=delta,
        ai_total_incomplete=incomplete,
        stroke_pred=stroke[0],
        stroke_true=stroke[1],
        lvo_pred=lvo[0],
        lvo_true=lvo[1],
    )


def test_percent_rounds_half_away_from_zero():
    assert percent(Fraction(6, 7)) == 86
    assert percent(Fraction(1, 3)) == 33
    assert percent(Fraction(3, 4)) == 75
    assert percent(Fraction(1, 2)) == 50
    assert percent(Fraction(1, 200)) == 1  # 0.5% -> 1
    assert percent(Fraction(-1, 200)) == -1


def test_component_concordance_pooled():
    results = []
    for i in range(10):
        matches = dict.fromkeys(("facial", "arm", "speech", "eye", "neglect"), True)
        if i >= 8:  # two cases break each non-facial component
            for name in ("arm", "speech", "eye", "neglect"):
                matches[name] = False
        results.append(case(f"c{i}", matches=matches))
    table = component_concordance(results)
    assert table["per_component"]["facial"]["percent"] == 100
    for name in ("arm", "speech", "eye", "neglect"):
        assert table["per_component"][name] == {"matched": 8, "total": 10, "percent": 80}
    assert table["pooled"] == {"matched": 42, "total": 50, "percent": 84}


def test_single_case_concordance():
    matches = {"facial": True, "arm": True, "speech": True, "eye": False, "neglect": False}
    table = component_concordance([case(matches=matches)])
    assert table["pooled"] == {"matched": 3, "total": 5, "percent": 60}


def test_confusion_stroke_paper_pattern():
    results = (
        [case(f"tp{i}", stroke=(True, True)) for i in range(6)]
        + [case("fn", stroke=(False, True))]
        + [case(f"fp{i}", stroke=(True, False)) for i in range(2)]
        + [case("tn", stroke=(False, False))]
    )
    row = confusion_metrics(results, "stroke")
    assert (row["tp"], row["fn"], row["fp"], row["tn"]) == (6, 1, 2, 1)
    assert row["sensitivity_percent"] == 86
    assert row["specificity_percent"] == 33
    assert row["accuracy_percent"] == 70


def test_confusion_lvo_over_stroke_subset():
    results = (
        [case(f"tp{i}", lvo=(True, True)) for i in range(3)]
        + [case("fn", lvo=(False, True))]
        + [case(f"tn{i}", lvo=(False, False)) for i in range(3)]
    )
    row = confusion_metrics(results, "lvo")
    assert (row["tp"], row["fn"], row["fp"], row["tn"]) == (3, 1, 0, 3)
    assert row["sensitivity_percent"] == 75
    assert row["specificity_percent"] == 100
    assert row["accuracy_percent"] == 86


def test_confusion_empty_negative_class_undefined():
    results = [case(f"p{i}", stroke=(True, True)) for i in range(3)]
    row = confusion_metrics(results, "stroke")
    assert row["specificity_percent"] is None
    assert row["sensitivity_percent"] == 100


@given(
    st.lists(
        st.tuples(st.booleans(), st.booleans()),
        min_size=1,
        max_size=40,
    )
)
def test_confusion_agrees_with_brute_force_count(pairs):
    results = [
        case(f"c{i}", stroke=(pred, truth)) for i, (pred, truth) in enumerate(pairs)
    ]
    row = confusion_metrics(results, "stroke")
    tp = sum(1 for pred, truth in pairs if pred and truth)
    fn = sum(1 for pred, truth in pairs if not pred and truth)
    fp = sum(1 for pred, truth in pairs if pred and not truth)
    tn = sum(1 for pred, truth in pairs if not pred and not truth)
    assert (row["tp"], row["fn"], row["fp"], row["tn"]) == (tp, fn, fp, tn)
    if tp + fn:
        assert row["sensitivity_percent"] == percent(Fraction(tp, tp + fn))
    else:
        assert row["sensitivity_percent"] is None
    assert row["accuracy_percent"] == percent(Fraction(tp + tn, len(pairs)))


def test_delta_histogram_with_incomplete():
    results = (
        [case(f"a{i}", delta=0) for i in range(5)]
        + [case(f"b{i}", delta=1 if i % 2 else -1) for i in range(3)]
        + [case("c0", delta=2), case("c1", delta=-2, incomplete=True)]
    )
    table = total_score_deltas(results)
    assert table["by_abs_delta"] == {"0": 5, "1": 3, "2": 2}
    assert table["incomplete"] == 1


def test_timing_stats_exact():
    stats = timing_stats([333, 375, 417])
    assert stats["mean_s"] == 375
    assert stats["sd_s"] == 42


def test_timing_single_sample_sd_undefined():
    stats = timing_stats([100, 100, 100])
    assert stats["sd_s"] == 0
    stats = timing_stats([123])
    assert stats["sd_s"] is None
    with pytest.raises(ValueError):
        timing_stats([])


def test_likert_median_iqr():
    summary = likert_summary([4, 4, 4, 4, 4, 5, 5, 5, 5, 5])
    assert summary["median"] == 4.5
    assert (summary["iqr_low"], summary["iqr_high"]) == (4, 5)


def test_likert_mean_two_decimals():
    assert likert_summary([5, 5, 4])["mean"] == 4.67


def test_likert_single_value():
    summary = likert_summary([3])
    assert summary["median"] == 3
    assert (summary["iqr_low"], summary["iqr_high"]) == (3, 3)


def test_likert_rejects_bad_input():
    with pytest.raises(ValueError):
        likert_summary([])
    with pytest.raises(ValueError):
        likert_summary([0, 5])
    with pytest.raises(ValueError):
        likert_summary([6])


@given(st.lists(st.integers(1, 5), min_size=1, max_size=50))
def test_likert_properties(values):
    summary = likert_summary(values)
    assert min(values) <= summary["iqr_low"] <= summary["iqr_high"] <= max(values)
    assert min(values) <= summary["median"] <= max(values)
    assert 1 <= summary["mean"] <= 5
