"""Evaluation: align model judgements against each rater's reference labels."""

from __future__ import annotations

from typing import Mapping, Sequence

from jalign.core.consensus import aggregate_consensus
from jalign.core.distribution import distribution_from_counts, label_distribution
from jalign.core.labels import LABEL_ORDER, JudgementLabel
from jalign.core.types import DistributionReport, SegmentLabelSet
from jalign.errors import CoverageError, NotFoundError
from jalign.core.mapping import map_intervals_to_segments
from jalign.evaluation.alignment import AlignmentReport, SegmentKey, compute_alignment
from jalign.evaluation.descriptions import (
    AdjudicatedReference,
    reference_from_row,
    score_descriptions,
)
from jalign.evaluation.radar import export_radar, summary_table
from jalign.evaluation.ranking import compare_raters
from jalign.prompts.types import ALL_CONDITIONS, PromptCondition
from jalign.store.canonical import doc_hash, read_jsonl, write_atomic, write_json
from jalign.store.families import load_intervals, load_judgements, row_to_record
from jalign.store.project import Project, path_slug
from jalign.pipeline.runs import RunDir, RunRecord, compute_run_id, timestamp


def _distribution_doc(report: DistributionReport) -> dict:
    return {
        "counts": {label.value: report.counts[label] for label in LABEL_ORDER},
        "percentages": {label.value: report.percentages[label] for label in LABEL_ORDER},
        "total": report.total,
    }


def load_reference_labels(project: Project) -> dict[str, list[SegmentLabelSet]]:
    """Per-rater reference labels for every manifest video, keyed by rater.

    Each rater must have an annotation file for every video; a gap is a
    coverage failure, not something to silently skip.
    """
    manifest = project.manifest()
    raters = project.raters()
    if not raters:
        raise CoverageError("no rater annotations found under annotations/")
    per_rater: dict[str, list[SegmentLabelSet]] = {r: [] for r in raters}
    for rater in raters:
        for video in manifest.videos:
            path = project.paths.annotation_file(rater, video.video_id)
            if not path.is_file():
                raise CoverageError(
                    f"rater {rater!r} has no annotations for video {video.video_id!r}"
                )
            intervals = load_intervals(path)
            segments = project.segments_for(video)
            per_rater[rater].append(
                map_intervals_to_segments(intervals, segments, rater_id=rater)
            )
    return per_rater


def _pool_labels(label_sets: Sequence[SegmentLabelSet]) -> dict[SegmentKey, JudgementLabel]:
    pooled: dict[SegmentKey, JudgementLabel] = {}
    for label_set in label_sets:
        for index, label in enumerate(label_set.labels):
            pooled[(label_set.video_id, index)] = label
    return pooled


def _predicted_labels(project: Project, run_id: str) -> dict[SegmentKey, JudgementLabel]:
    run_dir = RunDir(project.paths.run_dir(run_id))
    if not run_dir.exists():
        raise NotFoundError(f"judge run not found: {run_id}")
    if not run_dir.judgements_file.is_file():
        raise NotFoundError(f"run {run_id} has no judgements artifact")
    predicted: dict[SegmentKey, JudgementLabel] = {}
    for video_id, index, output in load_judgements(run_dir.judgements_file):
        predicted[(video_id, index)] = output.label
    return predicted


def _expected_grid(project: Project) -> set[SegmentKey]:
    manifest = project.manifest()
    grid: set[SegmentKey] = set()
    for video in manifest.videos:
        for segment in project.segments_for(video):
            grid.add((segment.video_id, segment.index))
    return grid


def _check_coverage(
    predicted: Mapping[SegmentKey, JudgementLabel],
    expected: set[SegmentKey],
    run_id: str,
) -> None:
    missing = sorted(expected - set(predicted))
    extra = sorted(set(predicted) - expected)
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"{len(missing)} segments without judgements (first: {missing[:3]})")
        if extra:
            parts.append(f"{len(extra)} judgements outside the manifest (first: {extra[:3]})")
        raise CoverageError(f"run {run_id} coverage mismatch: " + "; ".join(parts))


def _consensus_distribution(
    per_rater: Mapping[str, Sequence[SegmentLabelSet]]
) -> dict:
    """Strict-majority consensus distribution pooled over every video."""
    raters = sorted(per_rater)
    by_video: dict[str, list[SegmentLabelSet]] = {}
    for rater in raters:
        for label_set in per_rater[rater]:
            by_video.setdefault(label_set.video_id, []).append(label_set)
    counts = {label: 0 for label in LABEL_ORDER}
    excluded = 0
    for video_id in sorted(by_video):
        for consensus in aggregate_consensus(by_video[video_id]):
            if consensus.label is None:
                excluded += 1
            else:
                counts[consensus.label] += 1
    doc = _distribution_doc(distribution_from_counts(counts))
    doc["excluded_segments"] = excluded
    return doc


def _load_field_references(project: Project) -> list[AdjudicatedReference] | None:
    path = project.paths.annotations_dir / "_references" / "descriptions.jsonl"
    if not path.is_file():
        return None
    return [
        reference_from_row(row, label=f"{path}:{i + 1}")
        for i, row in enumerate(read_jsonl(path))
    ]


def run_evaluate(
    project: Project,
    *,
    conditions: Sequence[PromptCondition] = ALL_CONDITIONS,
    judge_run_ids: Mapping[str, str] | None = None,
) -> RunRecord:
    """Produce alignment reports, the radar export, distributions and rankings.

    ``judge_run_ids`` maps condition slugs to explicit run ids; conditions not
    named there fall back to the most recent judge run for that condition.
    """
    per_rater = load_reference_labels(project)
    raters = sorted(per_rater)

    resolved: dict[str, str] = {}
    for condition in conditions:
        slug = condition.slug
        run_id = (judge_run_ids or {}).get(slug) or project.latest_run_id("judge", slug)
        if run_id is None:
            raise NotFoundError(f"no judge run found for condition {slug!r}")
        resolved[slug] = run_id

    expected = _expected_grid(project)
    predictions: dict[str, dict[SegmentKey, JudgementLabel]] = {}
    models: dict[str, str] = {}
    for slug, run_id in resolved.items():
        predicted = _predicted_labels(project, run_id)
        _check_coverage(predicted, expected, run_id)
        predictions[slug] = predicted
        models[slug] = RunDir(project.paths.run_dir(run_id)).load().model_name

    input_hashes = {
        "judge_runs": doc_hash(resolved),
        "annotations": doc_hash(
            {
                rater: [
                    {
                        "video_id": ls.video_id,
                        "labels": [label.value for label in ls.labels],
                    }
                    for ls in per_rater[rater]
                ]
                for rater in raters
            }
        ),
    }
    run_id = compute_run_id("evaluate", None, input_hashes, doc_hash(sorted(predictions)))
    run_dir = RunDir(project.paths.run_dir(run_id))
    if run_dir.is_sealed():
        return run_dir.load()

    record = RunRecord(
        run_id=run_id,
        kind="evaluate",
        condition=None,
        model_name=",".join(sorted(set(models.values()))),
        backend_id="evaluation",
        created_at=timestamp(deterministic=True),
        config_hash=doc_hash(sorted(resolved.values())),
        input_hashes=input_hashes,
        extra={"judge_run_ids": resolved},
    )
    run_dir.save(record)
    reports_dir = run_dir.reports_dir
    reports_dir.mkdir(parents=True, exist_ok=True)

    reports: list[AlignmentReport] = []
    artifacts: list[str] = []
    for condition in conditions:
        slug = condition.slug
        for rater in raters:
            reference = _pool_labels(per_rater[rater])
            report = compute_alignment(
                predictions[slug],
                reference,
                rater_id=rater,
                model_name=models[slug],
                condition=condition,
            )
            reports.append(report)
            name = f"alignment__{slug}__{path_slug(rater)}.json"
            write_json(reports_dir / name, report.to_doc())
            artifacts.append(f"reports/{name}")

    radar_doc = export_radar(reports)
    write_json(reports_dir / "radar.json", radar_doc)
    artifacts.append("reports/radar.json")

    write_atomic(
        reports_dir / "summary.txt", summary_table(reports).encode("utf-8")
    )
    artifacts.append("reports/summary.txt")

    distributions = {
        "schema_version": 1,
        "raters": {
            rater: _distribution_doc(
                label_distribution(
                    [label for ls in per_rater[rater] for label in ls.labels]
                )
            )
            for rater in raters
        },
        "consensus": _consensus_distribution(per_rater),
    }
    write_json(reports_dir / "distributions.json", distributions)
    artifacts.append("reports/distributions.json")

    write_json(reports_dir / "ranking.json", compare_raters(reports))
    artifacts.append("reports/ranking.json")

    references = _load_field_references(project)
    if references is not None:
        describe_run_id = None
        for slug in sorted(resolved):
            judge_record = RunDir(project.paths.run_dir(resolved[slug])).load()
            describe_run_id = judge_record.extra.get("describe_run_id")
            if describe_run_id:
                break
        if describe_run_id:
            desc_dir = RunDir(project.paths.run_dir(describe_run_id))
            if desc_dir.descriptions_file.is_file():
                generated = [
                    row_to_record(row)
                    for row in read_jsonl(desc_dir.descriptions_file)
                ]
                accuracy = score_descriptions(generated, references)
                write_json(reports_dir / "field_accuracy.json", accuracy.to_doc())
                artifacts.append("reports/field_accuracy.json")

    record.artifacts = artifacts
    record.sealed = True
    run_dir.save(record)
    project.register_run(run_id, kind="evaluate", condition=None)
    return record
