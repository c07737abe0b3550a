"""Independent reference implementations for the numeric contracts.

Everything here is written directly from the stated definitions (strict majority,
half-up rounding, precision/recall/F1 over a confusion count) without importing
package logic, so agreement between the two sides is evidence rather than
tautology. Frozen: changes here need a reason written in the commit.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Sequence


def half_up_fraction(value: Fraction, decimals: int) -> float:
    """Round a non-negative exact rational half-up to the given decimals."""
    assert value >= 0
    q = 10**decimals
    scaled = value * q
    return math.floor(scaled + Fraction(1, 2)) / q


def percentage(count: int, total: int, decimals: int = 1) -> float:
    return half_up_fraction(Fraction(100 * count, total), decimals)


def consensus_row(labels: Sequence[str]) -> tuple[str | None, int]:
    """Strict-majority vote: a label wins iff its count exceeds half the raters."""
    counts = Counter(labels)
    n = len(labels)
    for label, c in counts.items():
        if 2 * c > n:
            return label, c
    return None, 0


def class_metrics(
    pairs: Sequence[tuple[str, str]], label: str
) -> tuple[float, float, float, int, int]:
    """Brute-force precision/recall/F1 for one label over (reference, predicted) pairs.

    Uses the same float operations the definitions imply (int/int division, the
    2PR/(P+R) form), so exact float equality with any faithful implementation is
    the expected outcome, not an approximation.
    """
    tp = sum(1 for ref, pred in pairs if ref == label and pred == label)
    predicted = sum(1 for _, pred in pairs if pred == label)
    support = sum(1 for ref, _ in pairs if ref == label)
    precision = tp / predicted if predicted else 0.0
    recall = tp / support if support else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1, support, predicted


def segment_count(duration: float, nominal: float = 5.0, merge_below: float = 1.0) -> int:
    """Expected number of segments under uniform slicing with sub-threshold tail merge."""
    full = int(duration // nominal)
    if full == 0:
        return 1
    remainder = duration - full * nominal
    if remainder == 0 or remainder < merge_below:
        return full
    return full + 1


def check_tiling(
    duration: float,
    spans: Sequence[tuple[float, float]],
    nominal: float = 5.0,
    merge_below: float = 1.0,
) -> None:
    """Assert the tiling properties every segmentation output must satisfy."""
    assert spans, "a positive-duration video must produce at least one segment"
    assert spans[0][0] == 0.0
    assert spans[-1][1] == duration
    for (_, prev_end), (next_start, _) in zip(spans, spans[1:]):
        assert prev_end == next_start, "segments must tile without gaps or overlaps"
    for start, end in spans:
        assert end > start
        assert end - start <= nominal + merge_below + 1e-9
    for start, end in spans[:-1]:
        assert abs((end - start) - nominal) < 1e-9, "only the last segment may deviate"
    if len(spans) > 1:
        last = spans[-1][1] - spans[-1][0]
        assert last >= merge_below - 1e-9, "a tail shorter than the merge threshold must be merged"
