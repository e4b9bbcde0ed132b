"""Pure domain layer: assessment schema, rubric scoring, classification,
consistency checking and report construction."""

from .consistency import check_consistency
from .model import (
    AncillaryData,
    AphasiaFinding,
    ArmFinding,
    ArmSeverity,
    ArmSide,
    AssessmentState,
    ComponentScores,
    COMPONENTS,
    Demographics,
    Discrepancy,
    DiscrepancyKind,
    EyeDirection,
    EyeFinding,
    EyeSeverity,
    FacialFinding,
    FastEdFindings,
    GlucoseReading,
    KNOWN_ANTICOAGULANTS,
    ModelError,
    NeglectFinding,
    PriorStroke,
    Resolution,
    RESOLUTION_FOR_KIND,
    Sex,
    TimeAnchors,
    TranscriptDigest,
    TranscriptTurn,
    VideoRef,
    missing_fields,
)
from .report import Report, ReportBuildError, REPORT_SCHEMA, build_report
from .scoring import (
    LVO_THRESHOLD,
    MAX_TOTAL,
    classify_lvo,
    classify_stroke,
    classify_stroke_scores,
    score_fast_ed,
    total_score,
)

__all__ = [
    "AncillaryData",
    "AphasiaFinding",
    "ArmFinding",
    "ArmSeverity",
    "ArmSide",
    "AssessmentState",
    "ComponentScores",
    "COMPONENTS",
    "Demographics",
    "Discrepancy",
    "DiscrepancyKind",
    "EyeDirection",
    "EyeFinding",
    "EyeSeverity",
    "FacialFinding",
    "FastEdFindings",
    "GlucoseReading",
    "KNOWN_ANTICOAGULANTS",
    "LVO_THRESHOLD",
    "MAX_TOTAL",
    "ModelError",
    "NeglectFinding",
    "PriorStroke",
    "Report",
    "ReportBuildError",
    "REPORT_SCHEMA",
    "Resolution",
    "RESOLUTION_FOR_KIND",
    "Sex",
    "TimeAnchors",
    "TranscriptDigest",
    "TranscriptTurn",
    "VideoRef",
    "build_report",
    "check_consistency",
    "classify_lvo",
    "classify_stroke",
    "classify_stroke_scores",
    "missing_fields",
    "score_fast_ed",
    "total_score",
]
