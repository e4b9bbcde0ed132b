"""Outcome metrics over scenario runs.

Ratios are kept as exact rationals and only rendered to integer percent
at the edge (rounding half away from zero). A divided-by-empty-class
metric is reported as undefined (JSON null), never as zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Any, Optional

from ..assessment import COMPONENTS

METRICS_SCHEMA = "voice-metrics/1"

ANCILLARY_FIELDS = (
    "sex",
    "age",
    "last_known_well",
    "symptom_onset",
    "anticoagulants",
    "prior_stroke",
    "glucose",
)


@dataclass
class CaseResult:
    scenario_id: str
    component_match: dict[str, bool] = field(default_factory=dict)
    ai_scores: dict[str, Optional[int]] = field(default_factory=dict)
    gt_scores: dict[str, int] = field(default_factory=dict)
    total_delta: int = 0
    ai_total_incomplete: bool = False
    stroke_pred: bool = False
    stroke_true: bool = False
    lvo_pred: bool = False
    lvo_true: bool = False
    ancillary_match: dict[str, bool] = field(default_factory=dict)
    duration_s: float = 0.0
    user_confidence: Optional[int] = None
    report_path: Optional[str] = None
    errored: bool = False
    error: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario_id": self.scenario_id,
            "errored": self.errored,
            "error": self.error,
            "component_match": self.component_match,
            "ai_scores": self.ai_scores,
            "gt_scores": self.gt_scores,
            "total_delta": self.total_delta,
            "ai_total_incomplete": self.ai_total_incomplete,
            "stroke_pred": self.stroke_pred,
            "stroke_true": self.stroke_true,
            "lvo_pred": self.lvo_pred,
            "lvo_true": self.lvo_true,
            "ancillary_match": self.ancillary_match,
            "duration_s": self.duration_s,
            "user_confidence": self.user_confidence,
        }


def percent(ratio: Fraction) -> int:
    """Integer percent, half rounded away from zero."""
    scaled = ratio * 100
    if scaled >= 0:
        return int(scaled + Fraction(1, 2))
    return -int(-scaled + Fraction(1, 2))


def _ratio_dict(matched: int, total: int) -> dict[str, Any]:
    return {
        "matched": matched,
        "total": total,
        "percent": percent(Fraction(matched, total)) if total else None,
    }


def component_concordance(results: list[CaseResult]) -> dict[str, Any]:
    """Per-component and pooled agreement with ground truth."""
    if not results:
        raise ValueError("component_concordance requires at least one result")
    per: dict[str, Any] = {}
    matched_all = 0
    total_all = 0
    for name in COMPONENTS:
        matched = sum(1 for r in results if r.component_match.get(name))
        total = len(results)
        matched_all += matched
        total_all += total
        per[name] = _ratio_dict(matched, total)
    return {"per_component": per, "pooled": _ratio_dict(matched_all, total_all)}


def confusion_metrics(results: list[CaseResult], label: str) -> dict[str, Any]:
    """Sensitivity, specificity and accuracy for the binary label."""
    if label not in ("stroke", "lvo"):
        raise ValueError(f"unknown label {label!r}")
    tp = fn = fp = tn = 0
    for r in results:
        truth = r.stroke_true if label == "stroke" else r.lvo_true
        pred = r.stroke_pred if label == "stroke" else r.lvo_pred
        if truth and pred:
            tp += 1
        elif truth and not pred:
            fn += 1
        elif not truth and pred:
            fp += 1
        else:
            tn += 1
    sensitivity = Fraction(tp, tp + fn) if tp + fn else None
    specificity = Fraction(tn, tn + fp) if tn + fp else None
    accuracy = Fraction(tp + tn, len(results)) if results else None
    return {
        "tp": tp,
        "fn": fn,
        "fp": fp,
        "tn": tn,
        "sensitivity_percent": None if sensitivity is None else percent(sensitivity),
        "specificity_percent": None if specificity is None else percent(specificity),
        "accuracy_percent": None if accuracy is None else percent(accuracy),
    }


def total_score_deltas(results: list[CaseResult]) -> dict[str, Any]:
    """Histogram of |total delta| vs ground truth.

    Incomplete AI totals contribute their partial-sum delta to the
    histogram and are counted separately alongside.
    """
    by_abs: dict[int, int] = {}
    incomplete = 0
    for r in results:
        by_abs[abs(r.total_delta)] = by_abs.get(abs(r.total_delta), 0) + 1
        if r.ai_total_incomplete:
            incomplete += 1
    return {
        "by_abs_delta": {str(k): by_abs[k] for k in sorted(by_abs)},
        "incomplete": incomplete,
    }


def timing_stats(durations_s: list[float]) -> dict[str, Optional[float]]:
    """Arithmetic mean and sample (n-1) standard deviation."""
    if not durations_s:
        raise ValueError("timing_stats requires at least one duration")
    n = len(durations_s)
    mean = sum(durations_s) / n
    if n < 2:
        return {"mean_s": mean, "sd_s": None}
    variance = sum((d - mean) ** 2 for d in durations_s) / (n - 1)
    return {"mean_s": mean, "sd_s": sqrt(variance)}


def likert_summary(values: list[int]) -> dict[str, Any]:
    """Median (with .5 midpoints), inclusive nearest-rank quartiles, and
    the mean to two decimals."""
    if not values:
        raise ValueError("likert_summary requires at least one value")
    if any(not isinstance(v, int) or v < 1 or v > 5 for v in values):
        raise ValueError("likert values must be integers in 1..5")
    ordered = sorted(values)
    n = len(ordered)
    if n % 2:
        median: float = float(ordered[n // 2])
    else:
        median = (ordered[n // 2 - 1] + ordered[n // 2]) / 2
    iqr_low = ordered[_nearest_rank(25, n) - 1]
    iqr_high = ordered[_nearest_rank(75, n) - 1]
    mean_fraction = Fraction(sum(ordered), n)
    mean = (
        int(mean_fraction * 100 + Fraction(1, 2)) / 100
        if mean_fraction >= 0
        else -int(-mean_fraction * 100 + Fraction(1, 2)) / 100
    )
    return {"median": median, "iqr_low": iqr_low, "iqr_high": iqr_high, "mean": mean}


def _nearest_rank(p: int, n: int) -> int:
    rank = -(-p * n // 100)  # ceil(p*n/100)
    return max(1, min(n, rank))


def ancillary_accuracy(results: list[CaseResult]) -> dict[str, Any]:
    table: dict[str, Any] = {}
    for name in ANCILLARY_FIELDS:
        matched = sum(1 for r in results if r.ancillary_match.get(name))
        table[name] = _ratio_dict(matched, len(results))
    return table


def build_metrics(
    results: list[CaseResult], survey_ease: Optional[list[int]] = None
) -> dict[str, Any]:
    """Aggregate a suite run into the ``voice-metrics/1`` document."""
    ok = [r for r in results if not r.errored]
    errored = [r.scenario_id for r in results if r.errored]
    if not ok:
        raise ValueError("no completed cases to aggregate")
    confidences = [r.user_confidence for r in ok if r.user_confidence is not None]
    doc: dict[str, Any] = {
        "schema": METRICS_SCHEMA,
        "cases": len(results),
        "errored_cases": errored,
        "component_concordance": component_concordance(ok),
        "total_score_deltas": total_score_deltas(ok),
        "stroke": confusion_metrics(ok, "stroke"),
        "lvo": {
            **confusion_metrics(ok, "lvo"),
            "accuracy_note": (
                "accuracy computed from per-case labels over all cases "
                "(LVO-positive vs everything else, mimics included)"
            ),
        },
        "ancillary_accuracy": ancillary_accuracy(ok),
        "timing": timing_stats([r.duration_s for r in ok]),
        "user_confidence": likert_summary(confidences) if confidences else None,
        "ease_of_use": (
            {"values": survey_ease, **likert_summary(survey_ease)}
            if survey_ease
            else None
        ),
        "per_case": [r.to_dict() for r in sorted(results, key=lambda r: r.scenario_id)],
    }
    return doc


def render_metrics_table(doc: dict[str, Any]) -> str:
    """Fixed-width text rendering for the CLI."""
    lines: list[str] = []
    cc = doc["component_concordance"]
    lines.append("component concordance")
    for name, row in cc["per_component"].items():
        lines.append(
            f"  {name:<8} {row['matched']}/{row['total']}  ({row['percent']}%)"
        )
    pooled = cc["pooled"]
    lines.append(
        f"  pooled   {pooled['matched']}/{pooled['total']}  ({pooled['percent']}%)"
    )
    deltas = doc["total_score_deltas"]
    delta_parts = [f"|d|={k}: {v}" for k, v in deltas["by_abs_delta"].items()]
    lines.append(
        "total-score deltas  " + ", ".join(delta_parts)
        + f"  (incomplete: {deltas['incomplete']})"
    )
    for label in ("stroke", "lvo"):
        row = doc[label]
        lines.append(
            f"{label:<6} sens {_pct(row['sensitivity_percent'])}  "
            f"spec {_pct(row['specificity_percent'])}  "
            f"acc {_pct(row['accuracy_percent'])}  "
            f"(tp {row['tp']} fn {row['fn']} fp {row['fp']} tn {row['tn']})"
        )
    lines.append("ancillary accuracy")
    for name, row in doc["ancillary_accuracy"].items():
        lines.append(
            f"  {name:<16} {row['matched']}/{row['total']}  ({row['percent']}%)"
        )
    timing = doc["timing"]
    sd = "n/a" if timing["sd_s"] is None else f"{timing['sd_s']:.0f}"
    lines.append(f"timing  mean {timing['mean_s']:.0f} s, sd {sd} s")
    conf = doc.get("user_confidence")
    if conf:
        lines.append(
            f"confidence  median {conf['median']}, "
            f"IQR {conf['iqr_low']}-{conf['iqr_high']}, mean {conf['mean']}"
        )
    ease = doc.get("ease_of_use")
    if ease:
        lines.append(f"ease of use  mean {ease['mean']} ({ease['values']})")
    if doc["errored_cases"]:
        lines.append("ERRORED: " + ", ".join(doc["errored_cases"]))
    return "\n".join(lines)


def _pct(value: Optional[int]) -> str:
    return "undefined" if value is None else f"{value}%"
