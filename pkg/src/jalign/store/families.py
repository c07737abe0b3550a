"""Document conversion for each stored record family.

Stored families and where they live under a project root:

    manifest.json                         video inventory + segmentation rule
    config.json                           backends and prompt settings
    annotations/<rater>/<video>.jsonl     sealed interval annotations, one per line
    annotations/_sessions/<id>.json       live annotation sessions
    exemplars/library.jsonl               few-shot exemplar library
    runs/index.jsonl                      append-only run registry
    runs/<run_id>/...                     journal + artifacts + reports

Documents that get rewritten in place (manifest, exemplars, sessions, run records)
preserve unknown fields through an ``extra`` mapping; append-only streams are written
once and only ever read, where unknown keys are tolerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from jalign.core.labels import AgeBand, Category, JudgementLabel
from jalign.core.segmentation import SegmentRule
from jalign.core.types import IntervalAnnotation, SegmentLabelSet, SegmentRef, VideoRecord
from jalign.errors import InvalidInputError, ParseError, ValidationError, VersionError
from jalign.prompts.types import (
    BehaviourRecord,
    Exemplar,
    JudgementOutput,
    ParticipantDescription,
)
from jalign.store.canonical import read_json, read_jsonl, write_json, write_jsonl

SCHEMA_VERSION = 1


def check_schema_version(doc: Mapping[str, Any], label: str) -> int:
    version = doc.get("schema_version", 1)
    if not isinstance(version, int) or version < 1:
        raise ValidationError("schema_version must be a positive integer", field_path=label)
    if version > SCHEMA_VERSION:
        raise VersionError(
            f"document schema_version {version} is newer than supported {SCHEMA_VERSION}",
            field_path=label,
        )
    return version


def _extra_of(doc: Mapping[str, Any], known: Iterable[str]) -> dict[str, Any]:
    known_set = set(known)
    return {k: v for k, v in doc.items() if k not in known_set}


# --- manifest ---------------------------------------------------------------

_VIDEO_KEYS = ("video_id", "uri", "duration_s", "age_band", "category", "title")
_MANIFEST_KEYS = ("schema_version", "segment_rule", "videos")


@dataclass
class ProjectManifest:
    videos: list[VideoRecord]
    segment_rule: SegmentRule = field(default_factory=SegmentRule)
    extra: dict[str, Any] = field(default_factory=dict)

    def video(self, video_id: str) -> VideoRecord | None:
        for v in self.videos:
            if v.video_id == video_id:
                return v
        return None


def video_to_doc(video: VideoRecord) -> dict[str, Any]:
    doc = dict(video.extra)
    doc.update(
        video_id=video.video_id,
        uri=video.uri,
        duration_s=video.duration_s,
        age_band=video.age_band.value,
        category=video.category.value,
        title=video.title,
    )
    return doc


def manifest_to_doc(manifest: ProjectManifest) -> dict[str, Any]:
    doc = dict(manifest.extra)
    doc.update(
        schema_version=SCHEMA_VERSION,
        segment_rule={
            "nominal_len_s": manifest.segment_rule.nominal_len_s,
            "merge_tail_below_s": manifest.segment_rule.merge_tail_below_s,
        },
        videos=[video_to_doc(v) for v in manifest.videos],
    )
    return doc


def validate_manifest_doc(doc: Any) -> tuple[ProjectManifest | None, list[str]]:
    """Validate exhaustively; returns the manifest and every problem found."""
    errors: list[str] = []
    if not isinstance(doc, Mapping):
        return None, ["manifest: document must be a JSON object"]
    try:
        check_schema_version(doc, "manifest")
    except ValidationError as exc:
        return None, [str(exc)]

    rule = SegmentRule()
    rule_doc = doc.get("segment_rule", {})
    if not isinstance(rule_doc, Mapping):
        errors.append("segment_rule: must be an object")
    else:
        try:
            rule = SegmentRule(
                nominal_len_s=float(rule_doc.get("nominal_len_s", 5.0)),
                merge_tail_below_s=float(rule_doc.get("merge_tail_below_s", 1.0)),
            )
        except (InvalidInputError, TypeError, ValueError) as exc:
            errors.append(f"segment_rule: {exc}")

    videos_doc = doc.get("videos")
    videos: list[VideoRecord] = []
    if not isinstance(videos_doc, list) or not videos_doc:
        errors.append("videos: manifest must list at least one video")
        videos_doc = []
    seen: dict[str, int] = {}
    for i, vdoc in enumerate(videos_doc):
        path = f"videos[{i}]"
        if not isinstance(vdoc, Mapping):
            errors.append(f"{path}: must be an object")
            continue
        problems_before = len(errors)
        video_id = vdoc.get("video_id")
        if not video_id or not isinstance(video_id, str):
            errors.append(f"{path}.video_id: must be a non-empty string")
        elif video_id in seen:
            errors.append(f"{path}.video_id: duplicate of videos[{seen[video_id]}] ({video_id!r})")
        else:
            seen[video_id] = i
        uri = vdoc.get("uri")
        if not uri or not isinstance(uri, str):
            errors.append(f"{path}.uri: must be a non-empty string")
        duration = vdoc.get("duration_s")
        if not isinstance(duration, (int, float)) or isinstance(duration, bool) or duration <= 0:
            errors.append(f"{path}.duration_s: must be a positive number")
        age_band = category = None
        try:
            age_band = AgeBand.parse(str(vdoc.get("age_band", "")))
        except InvalidInputError as exc:
            errors.append(f"{path}.age_band: {exc}")
        try:
            category = Category.parse(str(vdoc.get("category", "")))
        except InvalidInputError as exc:
            errors.append(f"{path}.category: {exc}")
        if len(errors) == problems_before:
            videos.append(
                VideoRecord(
                    video_id=video_id,
                    uri=uri,
                    duration_s=float(duration),
                    age_band=age_band,
                    category=category,
                    title=str(vdoc.get("title", "")),
                    extra=_extra_of(vdoc, _VIDEO_KEYS),
                )
            )
    if errors:
        return None, errors
    return (
        ProjectManifest(videos=videos, segment_rule=rule, extra=_extra_of(doc, _MANIFEST_KEYS)),
        [],
    )


def load_manifest(path: Path) -> ProjectManifest:
    manifest, errors = validate_manifest_doc(read_json(path))
    if errors:
        raise ValidationError("; ".join(errors), field_path=str(path))
    return manifest


def save_manifest(path: Path, manifest: ProjectManifest) -> None:
    write_json(path, manifest_to_doc(manifest))


# --- interval annotations ----------------------------------------------------


def interval_to_row(iv: IntervalAnnotation) -> dict[str, Any]:
    return {
        "rater_id": iv.rater_id,
        "video_id": iv.video_id,
        "start_s": iv.start_s,
        "end_s": iv.end_s,
        "mark": iv.mark.value,
        "note": iv.note,
    }


def row_to_interval(row: Mapping[str, Any], label: str = "interval") -> IntervalAnnotation:
    try:
        return IntervalAnnotation(
            rater_id=row["rater_id"],
            video_id=row["video_id"],
            start_s=float(row["start_s"]),
            end_s=float(row["end_s"]),
            mark=JudgementLabel.parse(str(row["mark"])),
            note=str(row.get("note", "")),
        )
    except (KeyError, TypeError, ValueError, InvalidInputError, ParseError) as exc:
        raise ValidationError(str(exc), field_path=label) from exc


def save_intervals(path: Path, intervals: Iterable[IntervalAnnotation]) -> None:
    write_jsonl(path, (interval_to_row(iv) for iv in intervals))


def load_intervals(path: Path) -> list[IntervalAnnotation]:
    return [
        row_to_interval(row, label=f"{path}:{i + 1}")
        for i, row in enumerate(read_jsonl(path))
    ]


# --- segment label sets -------------------------------------------------------


def label_set_to_doc(label_set: SegmentLabelSet) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "rater_id": label_set.rater_id,
        "video_id": label_set.video_id,
        "labels": [label.value for label in label_set.labels],
    }


def doc_to_label_set(doc: Mapping[str, Any], label: str = "label_set") -> SegmentLabelSet:
    check_schema_version(doc, label)
    try:
        return SegmentLabelSet(
            rater_id=doc["rater_id"],
            video_id=doc["video_id"],
            labels=tuple(JudgementLabel.parse(str(v)) for v in doc["labels"]),
        )
    except (KeyError, TypeError, InvalidInputError, ParseError) as exc:
        raise ValidationError(str(exc), field_path=label) from exc


def save_label_set(path: Path, label_set: SegmentLabelSet) -> None:
    write_json(path, label_set_to_doc(label_set))


def load_label_set(path: Path) -> SegmentLabelSet:
    return doc_to_label_set(read_json(path), label=str(path))


# --- exemplars -----------------------------------------------------------------

_EXEMPLAR_KEYS = (
    "exemplar_id",
    "observation",
    "judgement",
    "reasoning",
    "provenance",
    "metadata",
)


def exemplar_to_row(ex: Exemplar) -> dict[str, Any]:
    row = dict(ex.extra)
    row.update(
        exemplar_id=ex.exemplar_id,
        observation=ex.observation,
        judgement=ex.judgement.value,
        reasoning=ex.reasoning,
        provenance={
            "unanimous": ex.unanimous,
            "source_segment": _segment_to_doc(ex.source_segment) if ex.source_segment else None,
        },
        metadata={
            "age_band": ex.age_band.value if ex.age_band else None,
            "category": ex.category.value if ex.category else None,
        },
    )
    return row


def row_to_exemplar(row: Mapping[str, Any], label: str = "exemplar") -> Exemplar:
    try:
        provenance = row.get("provenance", {})
        metadata = row.get("metadata", {})
        source = provenance.get("source_segment")
        age_band = metadata.get("age_band")
        category = metadata.get("category")
        return Exemplar(
            exemplar_id=row["exemplar_id"],
            observation=row["observation"],
            judgement=JudgementLabel.parse(str(row["judgement"])),
            reasoning=row.get("reasoning"),
            unanimous=bool(provenance.get("unanimous", False)),
            source_segment=_doc_to_segment(source) if source else None,
            age_band=AgeBand.parse(age_band) if age_band else None,
            category=Category.parse(category) if category else None,
            extra=_extra_of(row, _EXEMPLAR_KEYS),
        )
    except (KeyError, TypeError, InvalidInputError, ParseError) as exc:
        raise ValidationError(str(exc), field_path=label) from exc


def save_exemplars(path: Path, exemplars: Iterable[Exemplar]) -> None:
    write_jsonl(path, (exemplar_to_row(ex) for ex in exemplars))


def load_exemplars(path: Path) -> list[Exemplar]:
    return [
        row_to_exemplar(row, label=f"{path}:{i + 1}")
        for i, row in enumerate(read_jsonl(path))
    ]


# --- behaviour records (descriptions.jsonl) -------------------------------------


def _segment_to_doc(seg: SegmentRef) -> dict[str, Any]:
    return {
        "video_id": seg.video_id,
        "index": seg.index,
        "start_s": seg.start_s,
        "end_s": seg.end_s,
    }


def _doc_to_segment(doc: Mapping[str, Any]) -> SegmentRef:
    return SegmentRef(
        video_id=doc["video_id"],
        index=int(doc["index"]),
        start_s=float(doc["start_s"]),
        end_s=float(doc["end_s"]),
    )


def _participant_to_doc(desc: ParticipantDescription) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "gaze": desc.gaze,
        "action": desc.action,
        "vocalisation": desc.vocalisation,
    }
    if desc.engagement is not None:
        doc["engagement"] = desc.engagement
    return doc


def _doc_to_participant(doc: Mapping[str, Any]) -> ParticipantDescription:
    return ParticipantDescription(
        gaze=doc["gaze"],
        action=doc["action"],
        vocalisation=doc.get("vocalisation"),
        engagement=doc.get("engagement"),
    )


def record_to_row(record: BehaviourRecord) -> dict[str, Any]:
    row = _segment_to_doc(record.segment)
    row["parent"] = _participant_to_doc(record.parent)
    row["child"] = _participant_to_doc(record.child)
    return row


def row_to_record(row: Mapping[str, Any], label: str = "record") -> BehaviourRecord:
    try:
        return BehaviourRecord(
            segment=_doc_to_segment(row),
            parent=_doc_to_participant(row["parent"]),
            child=_doc_to_participant(row["child"]),
        )
    except (KeyError, TypeError, ValueError, InvalidInputError, ParseError) as exc:
        raise ValidationError(str(exc), field_path=label) from exc


def save_records(path: Path, records: Iterable[BehaviourRecord]) -> None:
    write_jsonl(path, (record_to_row(r) for r in records))


def load_records(path: Path) -> list[BehaviourRecord]:
    return [
        row_to_record(row, label=f"{path}:{i + 1}")
        for i, row in enumerate(read_jsonl(path))
    ]


# --- judgements (judgements.jsonl) ------------------------------------------------


def judgement_to_row(video_id: str, index: int, output: JudgementOutput) -> dict[str, Any]:
    return {
        "video_id": video_id,
        "index": index,
        "label": output.label.value,
        "observation_text": output.observation_text,
        "reasoning_text": output.reasoning_text,
    }


def row_to_judgement(row: Mapping[str, Any], label: str = "judgement") -> tuple[str, int, JudgementOutput]:
    try:
        output = JudgementOutput(
            segment_index=int(row["index"]),
            label=JudgementLabel.parse(str(row["label"])),
            observation_text=row.get("observation_text"),
            reasoning_text=row.get("reasoning_text"),
        )
        return str(row["video_id"]), int(row["index"]), output
    except (KeyError, TypeError, ValueError, InvalidInputError, ParseError) as exc:
        raise ValidationError(str(exc), field_path=label) from exc


def load_judgements(path: Path) -> list[tuple[str, int, JudgementOutput]]:
    return [
        row_to_judgement(row, label=f"{path}:{i + 1}")
        for i, row in enumerate(read_jsonl(path))
    ]
