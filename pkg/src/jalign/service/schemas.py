"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field, field_validator

from jalign.core.labels import JudgementLabel
from jalign.core.types import IntervalAnnotation, SegmentRef, VideoRecord


class VideoOut(BaseModel):
    video_id: str
    uri: str
    duration_s: float
    age_band: str
    category: str
    title: str = ""
    segment_count: int

    @classmethod
    def from_record(cls, video: VideoRecord, segment_count: int) -> "VideoOut":
        return cls(
            video_id=video.video_id,
            uri=video.uri,
            duration_s=video.duration_s,
            age_band=video.age_band.value,
            category=video.category.value,
            title=video.title,
            segment_count=segment_count,
        )


class SegmentOut(BaseModel):
    segment_id: str
    video_id: str
    index: int
    start_s: float
    end_s: float

    @classmethod
    def from_ref(cls, segment: SegmentRef) -> "SegmentOut":
        return cls(
            segment_id=segment.segment_id,
            video_id=segment.video_id,
            index=segment.index,
            start_s=segment.start_s,
            end_s=segment.end_s,
        )


class SessionCreate(BaseModel):
    rater_id: str = Field(min_length=1)
    video_id: str = Field(min_length=1)


class IntervalIn(BaseModel):
    start_s: float = Field(ge=0)
    end_s: float
    mark: str
    note: str = ""

    @field_validator("mark")
    @classmethod
    def _mark_is_strong_or_poor(cls, value: str) -> str:
        label = JudgementLabel.parse(value)
        if label is JudgementLabel.MODERATE:
            raise ValueError("Moderate spans are implicit; mark only Strong or Poor")
        return label.value

    def to_annotation(self, rater_id: str, video_id: str) -> IntervalAnnotation:
        return IntervalAnnotation(
            rater_id=rater_id,
            video_id=video_id,
            start_s=self.start_s,
            end_s=self.end_s,
            mark=JudgementLabel(self.mark),
            note=self.note,
        )


class IntervalOut(BaseModel):
    start_s: float
    end_s: float
    mark: str
    note: str = ""

    @classmethod
    def from_annotation(cls, interval: IntervalAnnotation) -> "IntervalOut":
        return cls(
            start_s=interval.start_s,
            end_s=interval.end_s,
            mark=interval.mark.value,
            note=interval.note,
        )


class SessionOut(BaseModel):
    session_id: str
    rater_id: str
    video_id: str
    version: int
    sealed: bool
    notes: str = ""
    interval_count: int = 0


class IntervalsOut(BaseModel):
    session_id: str
    version: int
    sealed: bool
    intervals: list[IntervalOut]
    notes: str = ""


class PutIntervalsRequest(BaseModel):
    expected_version: int = Field(ge=0)
    intervals: list[IntervalIn]
    notes: str | None = None


class SubmitRequest(BaseModel):
    expected_version: int = Field(ge=0)


class SegmentLabelOut(BaseModel):
    index: int
    start_s: float
    end_s: float
    label: str


class ProjectionOut(BaseModel):
    session_id: str
    video_id: str
    rater_id: str
    labels: list[SegmentLabelOut]


class IngestRequest(BaseModel):
    manifest: dict[str, Any]


class IngestResponse(BaseModel):
    video_count: int
    segment_count: int


class DescribeRequest(BaseModel):
    backend: str = "mock"
    video_ids: list[str] | None = None


class JudgeRequest(BaseModel):
    backend: str = "mock"
    conditions: list[str] | None = None
    describe_run_id: str | None = None


class EvaluateRequest(BaseModel):
    conditions: list[str] | None = None
    judge_run_ids: dict[str, str] | None = None


class RunOut(BaseModel):
    run_id: str
    kind: str
    condition: str | None = None
    model_name: str = ""
    backend_id: str = ""
    created_at: str = ""
    sealed: bool = False
    artifacts: list[str] = []
    failures: list[dict[str, Any]] = []
    warnings: list[str] = []


class RunListOut(BaseModel):
    runs: list[RunOut]


class JudgeResponse(BaseModel):
    runs: list[RunOut]


class ErrorBody(BaseModel):
    error: str
    message: str
