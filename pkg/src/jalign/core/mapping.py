"""Projection of rater intervals onto the segment grid."""

from __future__ import annotations

from typing import Sequence

from jalign.core.labels import JudgementLabel
from jalign.core.types import IntervalAnnotation, SegmentLabelSet, SegmentRef
from jalign.errors import IntervalOverlapError, InvalidInputError

# Absorbs float artifacts at interval/duration boundaries; not a tolerance knob.
_EPS = 1e-9


def validate_intervals(
    intervals: Sequence[IntervalAnnotation],
    *,
    duration_s: float | None = None,
    video_id: str | None = None,
) -> None:
    """Check one rater's intervals for a single video: in range and non-overlapping.

    Touching endpoints do not overlap; the spans are half-open.
    """
    if not intervals:
        return
    rater_ids = {iv.rater_id for iv in intervals}
    if len(rater_ids) > 1:
        raise InvalidInputError(f"intervals mix raters: {sorted(rater_ids)}")
    video_ids = {iv.video_id for iv in intervals}
    if len(video_ids) > 1:
        raise InvalidInputError(f"intervals mix videos: {sorted(video_ids)}")
    if video_id is not None and video_ids != {video_id}:
        raise InvalidInputError(
            f"intervals belong to video {video_ids.pop()!r}, expected {video_id!r}"
        )
    if duration_s is not None:
        for iv in intervals:
            if iv.end_s > duration_s + _EPS:
                raise InvalidInputError(
                    f"interval [{iv.start_s}, {iv.end_s}) lies outside [0, {duration_s}]"
                )
    ordered = sorted(intervals, key=lambda iv: (iv.start_s, iv.end_s))
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.start_s < prev.end_s - _EPS:
            raise IntervalOverlapError(
                f"intervals [{prev.start_s}, {prev.end_s}) and "
                f"[{cur.start_s}, {cur.end_s}) overlap"
            )


def _overlap(seg: SegmentRef, iv: IntervalAnnotation) -> float:
    return max(0.0, min(seg.end_s, iv.end_s) - max(seg.start_s, iv.start_s))


def map_intervals_to_segments(
    intervals: Sequence[IntervalAnnotation],
    segments: Sequence[SegmentRef],
    *,
    rater_id: str | None = None,
) -> SegmentLabelSet:
    """Project marked intervals onto segments, defaulting unmarked time to Moderate.

    Any positive overlap pulls a segment toward the interval's mark; when both marks
    touch a segment the larger total overlap wins and an exact tie falls back to
    Moderate. The result labels every segment.
    """
    if not segments:
        raise InvalidInputError("segments must be non-empty")
    video_id = segments[0].video_id
    if any(s.video_id != video_id for s in segments):
        raise InvalidInputError("segments mix videos")

    duration_s = segments[-1].end_s
    validate_intervals(intervals, duration_s=duration_s, video_id=video_id if intervals else None)

    if intervals:
        derived = intervals[0].rater_id
        if rater_id is not None and rater_id != derived:
            raise InvalidInputError(f"rater_id {rater_id!r} does not match intervals ({derived!r})")
        rater_id = derived
    elif rater_id is None:
        raise InvalidInputError("rater_id is required when there are no intervals")

    labels = []
    for seg in segments:
        strong = sum(_overlap(seg, iv) for iv in intervals if iv.mark is JudgementLabel.STRONG)
        poor = sum(_overlap(seg, iv) for iv in intervals if iv.mark is JudgementLabel.POOR)
        if strong > poor:
            labels.append(JudgementLabel.STRONG)
        elif poor > strong:
            labels.append(JudgementLabel.POOR)
        else:
            labels.append(JudgementLabel.MODERATE)
    return SegmentLabelSet(rater_id=rater_id, video_id=video_id, labels=tuple(labels))
