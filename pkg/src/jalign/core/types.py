"""Core value types for videos, segments, intervals and labels."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from jalign.core.labels import AgeBand, Category, JudgementLabel
from jalign.errors import InvalidInputError


@dataclass(frozen=True, eq=True)
class VideoRecord:
    """One source video as listed in the project manifest."""

    video_id: str
    uri: str
    duration_s: float
    age_band: AgeBand
    category: Category
    title: str = ""
    extra: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.video_id:
            raise InvalidInputError("video_id must be non-empty")
        if not self.duration_s > 0:
            raise InvalidInputError(f"duration_s must be positive, got {self.duration_s}")


@dataclass(frozen=True)
class SegmentRef:
    """Half-open time slice [start_s, end_s) of one video.

    Length bounds are a property of the segmentation rule in force, so they are
    enforced by segment_video, not here.
    """

    video_id: str
    index: int
    start_s: float
    end_s: float

    def __post_init__(self):
        if self.index < 0:
            raise InvalidInputError(f"segment index must be >= 0, got {self.index}")
        if self.start_s < 0:
            raise InvalidInputError(f"segment start must be >= 0, got {self.start_s}")
        if not self.end_s > self.start_s:
            raise InvalidInputError(
                f"segment end must exceed start, got [{self.start_s}, {self.end_s})"
            )

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s

    @property
    def segment_id(self) -> str:
        return f"{self.video_id}:{self.index}"


@dataclass(frozen=True)
class IntervalAnnotation:
    """A rater-marked span of Strong or Poor joint attention.

    Unmarked time is Moderate by convention, so Moderate intervals do not exist.
    """

    rater_id: str
    video_id: str
    start_s: float
    end_s: float
    mark: JudgementLabel
    note: str = ""

    def __post_init__(self):
        if not self.rater_id:
            raise InvalidInputError("rater_id must be non-empty")
        if not self.video_id:
            raise InvalidInputError("video_id must be non-empty")
        if self.start_s < 0:
            raise InvalidInputError(f"interval start must be >= 0, got {self.start_s}")
        if not self.end_s > self.start_s:
            raise InvalidInputError(
                f"interval end must exceed start, got [{self.start_s}, {self.end_s})"
            )
        if self.mark not in (JudgementLabel.STRONG, JudgementLabel.POOR):
            raise InvalidInputError(f"interval mark must be Strong or Poor, got {self.mark.value}")


@dataclass(frozen=True)
class SegmentLabelSet:
    """One rater's label for every segment of one video, ordered by segment index."""

    rater_id: str
    video_id: str
    labels: tuple[JudgementLabel, ...]

    def __post_init__(self):
        if not self.labels:
            raise InvalidInputError("a segment label set cannot be empty")

    def __len__(self) -> int:
        return len(self.labels)

    def label_for(self, index: int) -> JudgementLabel:
        return self.labels[index]


@dataclass(frozen=True)
class ConsensusLabel:
    """Majority outcome for one segment; label is None when no majority exists."""

    index: int
    label: JudgementLabel | None
    agreeing_count: int

    def __post_init__(self):
        if self.label is None and self.agreeing_count != 0:
            raise InvalidInputError("agreeing_count must be 0 when no consensus exists")
        if self.label is not None and self.agreeing_count < 2:
            raise InvalidInputError("a consensus label needs at least two agreeing raters")


@dataclass(frozen=True)
class DistributionReport:
    """Label counts plus half-up single-decimal percentages over the total."""

    counts: Mapping[JudgementLabel, int]
    percentages: Mapping[JudgementLabel, float]
    total: int
