"""Final report construction and canonical serialization.

The report is the one artifact that leaves the system, so it serializes
deterministically: fixed key order, UTF-8, minute-resolution timestamps.
Given the same state, transcript, videos and clock it is byte-identical
on every build.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Optional

from ..clock import format_minute
from .model import (
    AssessmentState,
    Discrepancy,
    TranscriptTurn,
    VideoRef,
    missing_fields,
)
from .scoring import score_fast_ed

REPORT_SCHEMA = "voice-report/1"


class ReportBuildError(ValueError):
    """Raised when the state references videos that were never registered."""

    def __init__(self, dangling: list[str]):
        self.dangling = dangling
        super().__init__(
            "state references unregistered video ids: " + ", ".join(sorted(dangling))
        )


@dataclass
class Report:
    payload: dict[str, Any]

    def to_json(self) -> str:
        return json.dumps(self.payload, ensure_ascii=False, indent=2) + "\n"

    def to_bytes(self) -> bytes:
        return self.to_json().encode("utf-8")


def build_report(
    state: AssessmentState,
    transcript: list[TranscriptTurn],
    videos: list[VideoRef],
    *,
    session_id: str,
    started_at: datetime,
    ended_at: datetime,
    discrepancies: Optional[list[Discrepancy]] = None,
    aborted: bool = False,
) -> Report:
    registered = {v.video_id: v for v in videos}
    dangling = [v.video_id for v in state.videos if v.video_id not in registered]
    if dangling:
        raise ReportBuildError(dangling)

    scores = score_fast_ed(state.findings)
    payload: dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "session_id": session_id,
        "session": {
            "started_at": format_minute(started_at),
            "ended_at": format_minute(ended_at),
            "duration_s": int((ended_at - started_at).total_seconds()),
            "aborted": aborted,
        },
        "demographics": {
            "age": state.demographics.age,
            "sex": state.demographics.sex.value,
        },
        "times": {
            "last_known_well": _opt_minute(state.times.last_known_well),
            "symptom_onset": _opt_minute(state.times.symptom_onset),
            "onset_witnessed": state.times.onset_witnessed,
        },
        "scores": {
            "facial": scores.facial,
            "arm": scores.arm,
            "speech": scores.speech,
            "eye": scores.eye,
            "neglect": scores.neglect,
            "total": scores.total,
            "partial_total": scores.partial_total,
            "incomplete": scores.incomplete,
        },
        "classification": {
            "stroke_likely": state.stroke_likely,
            "lvo_likely": state.lvo_likely,
        },
        "ancillary": {
            "anticoagulants": (
                None
                if state.ancillary.anticoagulants is None
                else sorted(state.ancillary.anticoagulants)
            ),
            "last_dose_time": _opt_minute(state.ancillary.last_dose_time),
            "prior_stroke": (
                None
                if state.ancillary.prior_stroke is None
                else state.ancillary.prior_stroke.value
            ),
            "prior_stroke_detail": state.ancillary.prior_stroke_detail,
            "glucose_mg_dl": (
                None if state.ancillary.glucose is None
                else state.ancillary.glucose.value_mg_dl
            ),
            "glucose_unmeasurable": (
                False if state.ancillary.glucose is None
                else state.ancillary.glucose.unmeasurable
            ),
        },
        "videos": [
            {
                "component": v.component,
                "video_id": v.video_id,
                "duration_s": v.duration_s,
                "uri": v.uri,
            }
            for v in state.videos
        ],
        "discrepancies": [
            {"kind": d.kind.value, "detail": d.detail, "resolution": d.resolution.value}
            for d in (discrepancies or [])
        ],
        "completeness": {"missing": missing_fields(state)},
        "summary_narrative": state.summary_narrative,
        "transcript": [
            {
                "speaker": turn.speaker,
                "text": turn.text,
                "at": format_minute(turn.timestamp),
            }
            for turn in transcript
        ],
    }
    return Report(payload=payload)


def _opt_minute(ts: Optional[datetime]) -> Optional[str]:
    return None if ts is None else format_minute(ts)
