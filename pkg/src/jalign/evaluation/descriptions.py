"""Description accuracy against adjudicated references."""

from __future__ import annotations

import re
import statistics
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from jalign.core.labels import CORE_CUE_FIELDS, CueField, Role
from jalign.core.types import SegmentRef
from jalign.errors import CoverageError, InvalidInputError
from jalign.evaluation.alignment import round_half_up
from jalign.prompts.types import BehaviourRecord

_WS = re.compile(r"\s+")
_TERMINAL_PUNCT = re.compile(r"[.!?…]+$")


def normalise_text(text: str) -> str:
    """Lowercase, collapse whitespace, trim, drop terminal punctuation. Idempotent."""
    value = _WS.sub(" ", text).strip().lower()
    value = _TERMINAL_PUNCT.sub("", value).strip()
    return value


class CorrectionKind(str, Enum):
    """How an adjudicated reference relates to the raw expert transcription."""

    ACCEPTED = "accepted"
    CONTRADICTION_FIXED = "contradiction_fixed"
    GRANULARITY_REFINED = "granularity_refined"


@dataclass(frozen=True)
class AdjudicatedReference:
    """The agreed-correct text for one (segment, role, field) cell."""

    segment: SegmentRef
    role: Role
    field: CueField
    reference_text: str
    correction_kind: CorrectionKind = CorrectionKind.ACCEPTED

    def __post_init__(self):
        if not self.reference_text.strip():
            raise InvalidInputError("reference_text must be non-empty (use 'None' for silence)")

    @property
    def key(self) -> tuple[str, int, Role, CueField]:
        return (self.segment.video_id, self.segment.index, self.role, self.field)


@dataclass(frozen=True)
class AccuracyStats:
    """Half-up 4-decimal summary over per-video accuracies."""

    mean: float
    median: float
    max: float
    min: float
    count: int


def aggregate_accuracy_stats(values: Sequence[float]) -> AccuracyStats:
    if not values:
        raise InvalidInputError("cannot aggregate zero accuracy values")
    return AccuracyStats(
        mean=round_half_up(sum(values) / len(values), 4),
        median=round_half_up(statistics.median(values), 4),
        max=round_half_up(max(values), 4),
        min=round_half_up(min(values), 4),
        count=len(values),
    )


@dataclass(frozen=True)
class FieldAccuracyReport:
    """Per-field description accuracy: per-video values plus summary stats."""

    per_video: Mapping[CueField, Mapping[str, float]]
    stats: Mapping[CueField, AccuracyStats]
    segment_count: int

    def to_doc(self) -> dict[str, Any]:
        return {
            "schema_version": 1,
            "segment_count": self.segment_count,
            "fields": {
                field.value: {
                    "per_video": {
                        vid: round_half_up(acc, 4)
                        for vid, acc in sorted(self.per_video[field].items())
                    },
                    "mean": self.stats[field].mean,
                    "median": self.stats[field].median,
                    "max": self.stats[field].max,
                    "min": self.stats[field].min,
                }
                for field in self.per_video
            },
        }


def reference_to_row(ref: AdjudicatedReference) -> dict[str, Any]:
    return {
        "video_id": ref.segment.video_id,
        "index": ref.segment.index,
        "start_s": ref.segment.start_s,
        "end_s": ref.segment.end_s,
        "role": ref.role.value,
        "field": ref.field.value,
        "reference_text": ref.reference_text,
        "correction_kind": ref.correction_kind.value,
    }


def reference_from_row(row: Mapping[str, Any], label: str = "reference") -> AdjudicatedReference:
    try:
        segment = SegmentRef(
            video_id=str(row["video_id"]),
            index=int(row["index"]),
            start_s=float(row["start_s"]),
            end_s=float(row["end_s"]),
        )
        return AdjudicatedReference(
            segment=segment,
            role=Role(row["role"]),
            field=CueField(row["field"]),
            reference_text=str(row["reference_text"]),
            correction_kind=CorrectionKind(row.get("correction_kind", "accepted")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad reference row at {label}: {exc}") from exc


def _generated_cells(record: BehaviourRecord) -> Iterable[tuple[Role, CueField, str]]:
    for role in (Role.PARENT, Role.CHILD):
        desc = record.for_role(role)
        yield role, CueField.GAZE, desc.gaze
        yield role, CueField.ACTION, desc.action
        yield role, CueField.VOCALISATION, desc.vocalisation if desc.vocalisation is not None else "None"
        if desc.engagement is not None:
            yield role, CueField.ENGAGEMENT, desc.engagement


def score_descriptions(
    generated: Sequence[BehaviourRecord],
    references: Sequence[AdjudicatedReference],
) -> FieldAccuracyReport:
    """Exact-match scoring after normalisation, grouped per video and cue field.

    Every generated cell must have an adjudicated reference; a gap is a coverage
    error naming the segment, role and field. Both roles pool into one per-video
    accuracy per field.
    """
    if not generated:
        raise InvalidInputError("no generated records to score")
    ref_index = {ref.key: ref.reference_text for ref in references}

    hits: dict[CueField, dict[str, int]] = {}
    totals: dict[CueField, dict[str, int]] = {}
    fields_seen: list[CueField] = list(CORE_CUE_FIELDS)
    for record in generated:
        video_id = record.segment.video_id
        for role, field, text in _generated_cells(record):
            key = (video_id, record.segment.index, role, field)
            if key not in ref_index:
                raise CoverageError(
                    f"no adjudicated reference for segment {record.segment.segment_id}, "
                    f"role {role.value}, field {field.value}",
                    segment=record.segment.segment_id,
                    role=role.value,
                    field=field.value,
                )
            if field is CueField.ENGAGEMENT and field not in fields_seen:
                fields_seen.append(field)
            correct = normalise_text(text) == normalise_text(ref_index[key])
            totals.setdefault(field, {}).setdefault(video_id, 0)
            hits.setdefault(field, {}).setdefault(video_id, 0)
            totals[field][video_id] += 1
            if correct:
                hits[field][video_id] += 1

    per_video = {
        field: {
            vid: hits[field][vid] / totals[field][vid] for vid in totals.get(field, {})
        }
        for field in fields_seen
        if field in totals
    }
    stats = {
        field: aggregate_accuracy_stats(list(per_video[field].values()))
        for field in per_video
    }
    return FieldAccuracyReport(
        per_video=per_video,
        stats=stats,
        segment_count=len(generated),
    )
