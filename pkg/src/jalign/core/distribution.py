"""Label distribution tables with exact half-up percentage rounding."""

from __future__ import annotations

from collections import Counter
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

from jalign.core.labels import LABEL_ORDER, JudgementLabel
from jalign.core.types import DistributionReport
from jalign.errors import InvalidInputError


def percentage(count: int, total: int, decimals: int = 1) -> float:
    """Half-up percentage of count over total, exact in decimal arithmetic."""
    if total <= 0:
        raise InvalidInputError("percentage total must be positive")
    quantum = Decimal(1).scaleb(-decimals)
    value = (Decimal(count) * 100 / Decimal(total)).quantize(quantum, rounding=ROUND_HALF_UP)
    return float(value)


def distribution_from_counts(counts: Mapping[JudgementLabel, int]) -> DistributionReport:
    """Build a distribution report from per-label counts."""
    full = {label: int(counts.get(label, 0)) for label in LABEL_ORDER}
    if any(c < 0 for c in full.values()):
        raise InvalidInputError("label counts must be non-negative")
    total = sum(full.values())
    if total == 0:
        raise InvalidInputError("cannot compute a distribution over zero labels")
    percentages = {label: percentage(full[label], total) for label in LABEL_ORDER}
    return DistributionReport(counts=full, percentages=percentages, total=total)


def label_distribution(labels: Sequence[JudgementLabel]) -> DistributionReport:
    """Count labels and report half-up single-decimal percentages over the total."""
    if not labels:
        raise InvalidInputError("cannot compute a distribution over an empty label list")
    return distribution_from_counts(Counter(labels))
