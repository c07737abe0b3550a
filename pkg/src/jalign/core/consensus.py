"""Multi-rater consensus aggregation."""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from jalign.core.types import ConsensusLabel, SegmentLabelSet
from jalign.errors import InvalidInputError


def aggregate_consensus(label_sets: Sequence[SegmentLabelSet]) -> list[ConsensusLabel]:
    """Per-segment strict-majority vote across raters.

    A label is the consensus iff more than half the raters chose it; otherwise the
    segment has no consensus (label None, agreeing_count 0). Strict majority means at
    most one label can ever qualify, so rater order is irrelevant.
    """
    if len(label_sets) < 2:
        raise InvalidInputError("consensus is undefined for fewer than two raters")
    length = len(label_sets[0])
    if any(len(ls) != length for ls in label_sets):
        raise InvalidInputError("label sets cover different segment counts")
    video_ids = {ls.video_id for ls in label_sets}
    if len(video_ids) > 1:
        raise InvalidInputError(f"label sets mix videos: {sorted(video_ids)}")

    n = len(label_sets)
    out = []
    for index in range(length):
        votes = Counter(ls.label_for(index) for ls in label_sets)
        label, top = votes.most_common(1)[0]
        if 2 * top > n:
            out.append(ConsensusLabel(index=index, label=label, agreeing_count=top))
        else:
            out.append(ConsensusLabel(index=index, label=None, agreeing_count=0))
    return out
