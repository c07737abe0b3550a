"""Evaluation: description accuracy, label alignment, exports and rankings."""

from jalign.evaluation.alignment import (
    AlignmentReport,
    ClassMetrics,
    ConfusionMatrix,
    class_metrics,
    compute_alignment,
    round_half_up,
)
from jalign.evaluation.descriptions import (
    AccuracyStats,
    AdjudicatedReference,
    CorrectionKind,
    FieldAccuracyReport,
    aggregate_accuracy_stats,
    normalise_text,
    reference_from_row,
    reference_to_row,
    score_descriptions,
)
from jalign.evaluation.radar import export_radar, parse_radar, radar_axes, summary_table
from jalign.evaluation.ranking import compare_raters

__all__ = [
    "AccuracyStats",
    "AdjudicatedReference",
    "AlignmentReport",
    "ClassMetrics",
    "ConfusionMatrix",
    "CorrectionKind",
    "FieldAccuracyReport",
    "aggregate_accuracy_stats",
    "class_metrics",
    "compare_raters",
    "compute_alignment",
    "export_radar",
    "normalise_text",
    "parse_radar",
    "radar_axes",
    "reference_from_row",
    "reference_to_row",
    "round_half_up",
    "score_descriptions",
    "summary_table",
]
