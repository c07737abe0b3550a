"""Domain model: labels, segments, intervals, consensus, distributions."""

from jalign.core.consensus import aggregate_consensus
from jalign.core.distribution import distribution_from_counts, label_distribution, percentage
from jalign.core.labels import (
    CORE_CUE_FIELDS,
    LABEL_ORDER,
    AgeBand,
    Category,
    CueField,
    JudgementLabel,
    Role,
)
from jalign.core.mapping import map_intervals_to_segments, validate_intervals
from jalign.core.segmentation import DEFAULT_RULE, SegmentRule, segment_video
from jalign.core.types import (
    ConsensusLabel,
    DistributionReport,
    IntervalAnnotation,
    SegmentLabelSet,
    SegmentRef,
    VideoRecord,
)

__all__ = [
    "AgeBand",
    "Category",
    "ConsensusLabel",
    "CueField",
    "CORE_CUE_FIELDS",
    "DEFAULT_RULE",
    "DistributionReport",
    "IntervalAnnotation",
    "JudgementLabel",
    "LABEL_ORDER",
    "Role",
    "SegmentLabelSet",
    "SegmentRef",
    "SegmentRule",
    "VideoRecord",
    "aggregate_consensus",
    "distribution_from_counts",
    "label_distribution",
    "map_intervals_to_segments",
    "percentage",
    "segment_video",
    "validate_intervals",
]
