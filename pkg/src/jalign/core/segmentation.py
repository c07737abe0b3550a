"""Uniform video segmentation with short-tail merging."""

from __future__ import annotations

from dataclasses import dataclass

from jalign.core.types import SegmentRef
from jalign.errors import InvalidInputError


@dataclass(frozen=True)
class SegmentRule:
    """Tiling parameters: nominal slice length and the tail-merge threshold."""

    nominal_len_s: float = 5.0
    merge_tail_below_s: float = 1.0

    def __post_init__(self):
        if not self.nominal_len_s > 0:
            raise InvalidInputError("nominal_len_s must be positive")
        if not 0 <= self.merge_tail_below_s <= self.nominal_len_s:
            raise InvalidInputError("merge_tail_below_s must lie in [0, nominal_len_s]")


DEFAULT_RULE = SegmentRule()


def segment_video(
    duration_s: float,
    *,
    video_id: str = "",
    rule: SegmentRule = DEFAULT_RULE,
) -> list[SegmentRef]:
    """Tile [0, duration_s) into half-open segments of the rule's nominal length.

    A final remainder shorter than the merge threshold is absorbed into the previous
    segment rather than emitted on its own; a video shorter than one nominal length
    yields a single segment whatever its duration.
    """
    if not duration_s > 0:
        raise InvalidInputError(f"duration_s must be positive, got {duration_s}")

    nominal = rule.nominal_len_s
    n_full = int(duration_s // nominal)
    remainder = duration_s - n_full * nominal

    if n_full == 0:
        count = 1
    elif remainder == 0:
        count = n_full
    elif remainder < rule.merge_tail_below_s:
        count = n_full  # tail folds into the last full segment
    else:
        count = n_full + 1

    segments = []
    for i in range(count):
        start = i * nominal
        end = (i + 1) * nominal if i < count - 1 else duration_s
        segments.append(SegmentRef(video_id=video_id, index=i, start_s=start, end_s=end))

    assert segments[0].start_s == 0.0
    assert segments[-1].end_s == duration_s
    # 1e-9 absorbs float dust from the start/end multiplications.
    assert all(s.duration_s <= nominal + rule.merge_tail_below_s + 1e-9 for s in segments)
    return segments
