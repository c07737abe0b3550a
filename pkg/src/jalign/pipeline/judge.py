"""Stage 2: turn behaviour descriptions into per-segment judgements."""

from __future__ import annotations

from typing import Sequence

from jalign.errors import (
    BackendError,
    CredentialError,
    ExemplarGapError,
    NotFoundError,
    ParseError,
)
from jalign.gateway.config import BackendKind
from jalign.gateway.invoke import invoke, make_backend
from jalign.gateway.journal import RunJournal
from jalign.gateway.requests import ModelRequest
from jalign.prompts.exemplars import select_exemplars
from jalign.prompts.parse import parse_stage2_response
from jalign.prompts.render import RenderOptions, render_stage2_prompt
from jalign.prompts.types import (
    ALL_CONDITIONS,
    BehaviourRecord,
    Exemplar,
    PromptCondition,
    Shots,
)
from jalign.store.canonical import doc_hash, read_jsonl, write_jsonl
from jalign.store.families import exemplar_to_row, judgement_to_row, row_to_record
from jalign.store.project import Project
from jalign.pipeline.runs import RunDir, RunRecord, compute_run_id, timestamp


def _descriptions_by_video(
    project: Project, describe_run_id: str
) -> tuple[dict[str, list[BehaviourRecord]], str]:
    run_dir = RunDir(project.paths.run_dir(describe_run_id))
    if not run_dir.exists():
        raise NotFoundError(f"describe run not found: {describe_run_id}")
    if not run_dir.descriptions_file.is_file():
        raise NotFoundError(
            f"run {describe_run_id} has no descriptions artifact"
        )
    rows = list(read_jsonl(run_dir.descriptions_file))
    by_video: dict[str, list[BehaviourRecord]] = {}
    for row in rows:
        rec = row_to_record(row)
        by_video.setdefault(rec.segment.video_id, []).append(rec)
    for records in by_video.values():
        records.sort(key=lambda r: r.segment.index)
    content_hash = doc_hash(rows)
    return by_video, content_hash


def _chunks(items: Sequence, size: int | None) -> list[list]:
    if size is None or size <= 0 or size >= len(items):
        return [list(items)] if items else []
    return [list(items[i : i + size]) for i in range(0, len(items), size)]


def _exemplars_for_video(
    project: Project, video_id: str, condition: PromptCondition
) -> tuple[Exemplar, ...] | None:
    if condition.shots is not Shots.FEW:
        return None
    video = project.video(video_id)
    return select_exemplars(
        project.exemplars(),
        style=condition.style,
        age_band=video.age_band,
        category=video.category,
    )


def run_judge(
    project: Project,
    *,
    backend_spec: str = "mock",
    conditions: Sequence[PromptCondition] = ALL_CONDITIONS,
    describe_run_id: str | None = None,
) -> list[RunRecord]:
    """Run one judgement pass per condition over an existing describe run."""
    config = project.config()
    backend_config = config.backend(backend_spec)
    options = RenderOptions(
        template_version=config.prompts.template_version,
        engagement_enabled=config.prompts.engagement_enabled,
    )
    if describe_run_id is None:
        describe_run_id = project.latest_run_id("describe")
        if describe_run_id is None:
            raise NotFoundError("no describe run found; run describe first")
    by_video, descriptions_hash = _descriptions_by_video(project, describe_run_id)

    exemplars_hash: str | None = None
    if any(c.shots is Shots.FEW for c in conditions):
        exemplars_hash = doc_hash([exemplar_to_row(e) for e in project.exemplars()])

    config_hash = doc_hash(backend_config.to_doc())
    backend = make_backend(backend_config)
    deterministic = backend_config.kind is BackendKind.MOCK
    records_out: list[RunRecord] = []

    for condition in conditions:
        input_hashes = {
            "descriptions": descriptions_hash,
            "describe_run": doc_hash(describe_run_id),
            "prompts": doc_hash(
                {
                    "template_version": config.prompts.template_version,
                    "engagement_enabled": config.prompts.engagement_enabled,
                    "chunk_size": config.prompts.judge_chunk_size,
                }
            ),
        }
        if condition.shots is Shots.FEW:
            input_hashes["exemplars"] = exemplars_hash
        run_id = compute_run_id("judge", condition.slug, input_hashes, config_hash)
        run_dir = RunDir(project.paths.run_dir(run_id))
        if run_dir.is_sealed():
            records_out.append(run_dir.load())
            continue

        run_dir.path.mkdir(parents=True, exist_ok=True)
        journal = RunJournal(run_dir.journal_file)
        record = RunRecord(
            run_id=run_id,
            kind="judge",
            condition=condition.slug,
            model_name=backend_config.model_name,
            backend_id=backend.backend_id,
            created_at=timestamp(deterministic),
            config_hash=config_hash,
            input_hashes=input_hashes,
            extra={"describe_run_id": describe_run_id},
        )
        run_dir.save(record)

        if condition.shots is Shots.FEW:
            # A gap in the exemplar library aborts just this condition; the
            # check runs up front so no backend call is wasted on it.
            try:
                for video_id in by_video:
                    _exemplars_for_video(project, video_id, condition)
            except ExemplarGapError as exc:
                record.failures.append(
                    {"segment_ids": [], "error": type(exc).__name__, "message": str(exc)}
                )
                run_dir.save(record)
                records_out.append(record)
                continue

        rows: list[dict] = []
        last_backend_error: BackendError | None = None
        for video_id, records in by_video.items():
            exemplars = _exemplars_for_video(project, video_id, condition)
            for chunk in _chunks(records, config.prompts.judge_chunk_size):
                prompt = render_stage2_prompt(
                    chunk,
                    condition=condition,
                    exemplars=exemplars,
                    options=options,
                )
                request = ModelRequest(
                    prompt=prompt,
                    model_name=backend_config.model_name,
                    decoding=backend_config.decoding,
                )
                try:
                    response = invoke(request, backend, journal=journal)
                    parsed = parse_stage2_response(response.raw_text, condition)
                except CredentialError:
                    # Retrying cannot help; abort instead of failing every chunk.
                    raise
                except (BackendError, ParseError) as exc:
                    if isinstance(exc, BackendError):
                        last_backend_error = exc
                    record.failures.append(
                        {
                            "segment_ids": [r.segment.segment_id for r in chunk],
                            "error": type(exc).__name__,
                            "message": str(exc),
                        }
                    )
                    continue
                record.warnings.extend(parsed.warnings)
                seen: set[int] = set()
                for output in parsed:
                    if not 0 <= output.segment_index < len(chunk):
                        record.warnings.append(
                            f"{video_id}: response segment {output.segment_index + 1} "
                            "outside prompt range; dropped"
                        )
                        continue
                    seen.add(output.segment_index)
                    segment = chunk[output.segment_index].segment
                    rows.append(judgement_to_row(segment.video_id, segment.index, output))
                missing = sorted(set(range(len(chunk))) - seen)
                if missing:
                    record.failures.append(
                        {
                            "segment_ids": [
                                chunk[i].segment.segment_id for i in missing
                            ],
                            "error": "MissingJudgement",
                            "message": "response omitted these segments",
                        }
                    )

        if last_backend_error is not None and not rows:
            # Total outage. Sealing an empty run here would pin this run id to
            # an empty artifact forever; leave it unsealed for a journal resume.
            raise last_backend_error

        order = {vid: pos for pos, vid in enumerate(by_video)}
        rows.sort(key=lambda row: (order[row["video_id"]], row["index"]))
        write_jsonl(run_dir.judgements_file, rows)
        record.artifacts = ["judgements.jsonl", "journal.jsonl"]
        record.sealed = True
        run_dir.save(record)
        project.register_run(run_id, kind="judge", condition=condition.slug)
        records_out.append(record)

    return records_out
