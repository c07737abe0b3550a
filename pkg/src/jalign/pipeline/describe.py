"""Stage 1: produce behaviour descriptions for every segment of every video."""

from __future__ import annotations

import subprocess
from pathlib import Path
from typing import Sequence

from jalign.core.segmentation import SegmentRef
from jalign.core.types import VideoRecord
from jalign.errors import (
    BackendError,
    ConfigurationError,
    CredentialError,
    NotFoundError,
    ParseError,
)
from jalign.gateway.config import BackendKind
from jalign.gateway.invoke import invoke, make_backend
from jalign.gateway.journal import RunJournal
from jalign.gateway.requests import MediaItem, ModelRequest
from jalign.prompts.parse import parse_stage1_response
from jalign.prompts.render import RenderOptions, render_stage1_prompt
from jalign.store.canonical import doc_hash, write_jsonl
from jalign.store.config import ProjectConfig
from jalign.store.families import record_to_row
from jalign.store.project import Project
from jalign.pipeline.runs import RunDir, RunRecord, compute_run_id, timestamp


def _chunks(items: Sequence, size: int) -> list[list]:
    size = max(1, size)
    return [list(items[i : i + size]) for i in range(0, len(items), size)]


def _slice_media(
    config: ProjectConfig,
    project_root: Path,
    video: VideoRecord,
    segment: SegmentRef,
) -> str:
    """Return a locator for one segment's media, slicing the source if configured."""
    slicer = config.media_slicer
    if slicer is None:
        # No slicer: hand the backend the whole-file locator plus a time fragment.
        return f"{video.uri}#t={segment.start_s:g},{segment.end_s:g}"
    out_dir = project_root / slicer.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{video.video_id}__{segment.index:04d}.mp4"
    if not out_path.exists():
        command = [
            part.format(
                input=video.uri,
                start=f"{segment.start_s:g}",
                end=f"{segment.end_s:g}",
                output=str(out_path),
            )
            for part in slicer.command
        ]
        try:
            subprocess.run(command, check=True, capture_output=True)
        except (OSError, subprocess.CalledProcessError) as exc:
            raise ConfigurationError(
                f"media slicer failed for {segment.segment_id}: {exc}"
            ) from exc
    return str(out_path)


def run_describe(
    project: Project,
    *,
    backend_spec: str = "mock",
    video_ids: Sequence[str] | None = None,
) -> RunRecord:
    """Describe every segment and write one descriptions.jsonl artifact.

    Re-running with identical inputs resumes from the journal instead of
    re-invoking the backend, so an interrupted run picks up where it stopped.
    """
    manifest = project.manifest()
    config = project.config()
    backend_config = config.backend(backend_spec)
    options = RenderOptions(
        template_version=config.prompts.template_version,
        engagement_enabled=config.prompts.engagement_enabled,
    )

    videos = list(manifest.videos)
    if video_ids is not None:
        wanted = set(video_ids)
        unknown = wanted - {v.video_id for v in videos}
        if unknown:
            raise NotFoundError(f"unknown video ids: {sorted(unknown)}")
        videos = [v for v in videos if v.video_id in wanted]

    input_hashes = {
        "videos": doc_hash(
            [
                {"video_id": v.video_id, "duration_s": v.duration_s}
                for v in videos
            ]
        ),
        "segment_rule": doc_hash(
            {
                "nominal_len_s": manifest.segment_rule.nominal_len_s,
                "merge_tail_below_s": manifest.segment_rule.merge_tail_below_s,
            }
        ),
        "prompts": doc_hash(
            {
                "template_version": config.prompts.template_version,
                "engagement_enabled": config.prompts.engagement_enabled,
                "chunk_size": config.prompts.describe_chunk_size,
            }
        ),
    }
    config_hash = doc_hash(backend_config.to_doc())
    run_id = compute_run_id("describe", None, input_hashes, config_hash)
    run_dir = RunDir(project.paths.run_dir(run_id))
    if run_dir.is_sealed():
        return run_dir.load()

    run_dir.path.mkdir(parents=True, exist_ok=True)
    journal = RunJournal(run_dir.journal_file)
    backend = make_backend(backend_config)
    deterministic = backend_config.kind is BackendKind.MOCK

    record = RunRecord(
        run_id=run_id,
        kind="describe",
        condition=None,
        model_name=backend_config.model_name,
        backend_id=backend.backend_id,
        created_at=timestamp(deterministic),
        config_hash=config_hash,
        input_hashes=input_hashes,
    )
    run_dir.save(record)

    rows: list[dict] = []
    last_backend_error: BackendError | None = None
    for video in videos:
        segments = project.segments_for(video)
        for chunk in _chunks(segments, config.prompts.describe_chunk_size):
            prompt = render_stage1_prompt(chunk, options=options)
            media: tuple[MediaItem, ...] = ()
            if backend_config.kind is BackendKind.WIRE_API:
                media = tuple(
                    MediaItem(
                        segment_id=seg.segment_id,
                        locator=_slice_media(config, project.paths.root, video, seg),
                    )
                    for seg in chunk
                )
            request = ModelRequest(
                prompt=prompt,
                model_name=backend_config.model_name,
                decoding=backend_config.decoding,
                media=media,
            )
            try:
                response = invoke(request, backend, journal=journal)
                records = parse_stage1_response(
                    response.raw_text,
                    chunk,
                    require_engagement=config.prompts.engagement_enabled,
                )
            except CredentialError:
                # Retrying cannot help; abort instead of failing every chunk.
                raise
            except (BackendError, ParseError) as exc:
                if isinstance(exc, BackendError):
                    last_backend_error = exc
                record.failures.append(
                    {
                        "segment_ids": [seg.segment_id for seg in chunk],
                        "error": type(exc).__name__,
                        "message": str(exc),
                    }
                )
                continue
            for rec in records:
                rows.append(record_to_row(rec))

    if last_backend_error is not None and not rows:
        # Total outage. Sealing an empty run here would pin this run id to an
        # empty artifact forever; leave it unsealed so a retry resumes the journal.
        raise last_backend_error

    order = {v.video_id: pos for pos, v in enumerate(videos)}
    rows.sort(key=lambda row: (order[row["video_id"]], row["index"]))
    write_jsonl(run_dir.descriptions_file, rows)
    record.artifacts = ["descriptions.jsonl", "journal.jsonl"]
    record.sealed = True
    run_dir.save(record)
    project.register_run(run_id, kind="describe", condition=None)
    return record
