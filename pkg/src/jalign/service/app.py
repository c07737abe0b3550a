"""The HTTP service: annotation capture plus pipeline control for one project."""

from __future__ import annotations

import mimetypes
import re
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse, RedirectResponse, Response
from fastapi.staticfiles import StaticFiles

from jalign.errors import JalignError, NotFoundError, ValidationError
from jalign.pipeline.describe import run_describe
from jalign.pipeline.evaluate import run_evaluate
from jalign.pipeline.judge import run_judge
from jalign.pipeline.runs import RunDir, RunRecord
from jalign.prompts.types import ALL_CONDITIONS, PromptCondition
from jalign.service.schemas import (
    DescribeRequest,
    EvaluateRequest,
    IngestRequest,
    IngestResponse,
    IntervalsOut,
    IntervalOut,
    JudgeRequest,
    JudgeResponse,
    ProjectionOut,
    PutIntervalsRequest,
    RunListOut,
    RunOut,
    SegmentLabelOut,
    SegmentOut,
    SessionCreate,
    SessionOut,
    SubmitRequest,
    VideoOut,
)
from jalign.service.sessions import Session, SessionStore
from jalign.store.project import Project

_STATUS_BY_KIND = {
    "validation": 422,
    "not_found": 404,
    "conflict": 409,
    "coverage": 409,
    "backend": 502,
}

_RANGE = re.compile(r"^bytes=(\d*)-(\d*)$")


def _session_out(session: Session) -> SessionOut:
    return SessionOut(
        session_id=session.session_id,
        rater_id=session.rater_id,
        video_id=session.video_id,
        version=session.version,
        sealed=session.sealed,
        notes=session.notes,
        interval_count=len(session.intervals),
    )


def _intervals_out(session: Session) -> IntervalsOut:
    return IntervalsOut(
        session_id=session.session_id,
        version=session.version,
        sealed=session.sealed,
        intervals=[IntervalOut.from_annotation(iv) for iv in session.intervals],
        notes=session.notes,
    )


def _run_out(record: RunRecord) -> RunOut:
    return RunOut(
        run_id=record.run_id,
        kind=record.kind,
        condition=record.condition,
        model_name=record.model_name,
        backend_id=record.backend_id,
        created_at=record.created_at,
        sealed=record.sealed,
        artifacts=list(record.artifacts),
        failures=list(record.failures),
        warnings=list(record.warnings),
    )


def _parse_conditions(slugs: list[str] | None) -> list[PromptCondition]:
    if not slugs:
        return list(ALL_CONDITIONS)
    return [PromptCondition.parse(slug) for slug in slugs]


def create_app(project_root: str | Path, *, ui_dir: str | Path | None = None) -> FastAPI:
    """Build the service around one project directory."""
    project = Project(project_root)
    sessions = SessionStore(project)
    app = FastAPI(title="jalign", version="0.1.0")
    app.state.project = project

    @app.exception_handler(JalignError)
    async def _jalign_error(request: Request, exc: JalignError) -> JSONResponse:
        status = _STATUS_BY_KIND.get(exc.kind, 422)
        return JSONResponse(
            status_code=status,
            content={"error": exc.kind, "message": str(exc)},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "initialized": project.is_initialized()}

    # --- videos ------------------------------------------------------------

    @app.get("/videos", response_model=list[VideoOut])
    def list_videos() -> list[VideoOut]:
        manifest = project.manifest()
        return [
            VideoOut.from_record(video, len(project.segments_for(video)))
            for video in manifest.videos
        ]

    @app.get("/videos/{video_id}/segments", response_model=list[SegmentOut])
    def video_segments(video_id: str) -> list[SegmentOut]:
        video = project.video(video_id)
        return [SegmentOut.from_ref(seg) for seg in project.segments_for(video)]

    @app.get("/videos/{video_id}/media")
    def video_media(video_id: str, request: Request) -> Response:
        video = project.video(video_id)
        if video.uri.startswith(("http://", "https://")):
            return RedirectResponse(video.uri, status_code=307)
        path = Path(video.uri)
        if not path.is_absolute():
            path = project.root / path
        if not path.is_file():
            raise NotFoundError(f"media file not found for video {video_id!r}")
        media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        size = path.stat().st_size
        range_header = request.headers.get("range")
        if range_header is None:
            return FileResponse(path, media_type=media_type, headers={"Accept-Ranges": "bytes"})
        match = _RANGE.match(range_header.strip())
        if not match or (not match.group(1) and not match.group(2)):
            return Response(
                status_code=416,
                headers={"Content-Range": f"bytes */{size}"},
            )
        if match.group(1):
            start = int(match.group(1))
            end = int(match.group(2)) if match.group(2) else size - 1
        else:
            # suffix range: last N bytes
            suffix = int(match.group(2))
            start = max(0, size - suffix)
            end = size - 1
        if start >= size or end < start:
            return Response(status_code=416, headers={"Content-Range": f"bytes */{size}"})
        end = min(end, size - 1)
        with path.open("rb") as fh:
            fh.seek(start)
            chunk = fh.read(end - start + 1)
        return Response(
            content=chunk,
            status_code=206,
            media_type=media_type,
            headers={
                "Content-Range": f"bytes {start}-{end}/{size}",
                "Accept-Ranges": "bytes",
                "Content-Length": str(len(chunk)),
            },
        )

    # --- annotation sessions -------------------------------------------------

    @app.post("/sessions", response_model=SessionOut)
    def create_session(body: SessionCreate) -> SessionOut:
        return _session_out(sessions.create_or_get(body.rater_id, body.video_id))

    @app.get("/sessions/{session_id}", response_model=SessionOut)
    def get_session(session_id: str) -> SessionOut:
        return _session_out(sessions.get(session_id))

    @app.get("/sessions/{session_id}/intervals", response_model=IntervalsOut)
    def get_intervals(session_id: str) -> IntervalsOut:
        return _intervals_out(sessions.get(session_id))

    @app.put("/sessions/{session_id}/intervals", response_model=IntervalsOut)
    def put_intervals(session_id: str, body: PutIntervalsRequest) -> IntervalsOut:
        session = sessions.get(session_id)
        intervals = [
            item.to_annotation(session.rater_id, session.video_id)
            for item in body.intervals
        ]
        updated = sessions.put_intervals(
            session_id,
            expected_version=body.expected_version,
            intervals=intervals,
            notes=body.notes,
        )
        return _intervals_out(updated)

    @app.post("/sessions/{session_id}/submit", response_model=SessionOut)
    def submit_session(session_id: str, body: SubmitRequest) -> SessionOut:
        return _session_out(
            sessions.submit(session_id, expected_version=body.expected_version)
        )

    @app.get("/sessions/{session_id}/projection", response_model=ProjectionOut)
    def session_projection(session_id: str) -> ProjectionOut:
        session = sessions.get(session_id)
        video = project.video(session.video_id)
        segments = project.segments_for(video)
        label_set = sessions.projection(session_id)
        return ProjectionOut(
            session_id=session.session_id,
            video_id=session.video_id,
            rater_id=session.rater_id,
            labels=[
                SegmentLabelOut(
                    index=seg.index,
                    start_s=seg.start_s,
                    end_s=seg.end_s,
                    label=label.value,
                )
                for seg, label in zip(segments, label_set.labels)
            ],
        )

    # --- pipeline ------------------------------------------------------------

    @app.post("/pipeline/ingest", response_model=IngestResponse)
    def pipeline_ingest(body: IngestRequest) -> IngestResponse:
        manifest = project.ingest(body.manifest)
        segment_count = sum(
            len(project.segments_for(video)) for video in manifest.videos
        )
        return IngestResponse(
            video_count=len(manifest.videos), segment_count=segment_count
        )

    @app.post("/pipeline/describe", response_model=RunOut)
    def pipeline_describe(body: DescribeRequest) -> RunOut:
        record = run_describe(
            project, backend_spec=body.backend, video_ids=body.video_ids
        )
        return _run_out(record)

    @app.post("/pipeline/judge", response_model=JudgeResponse)
    def pipeline_judge(body: JudgeRequest) -> JudgeResponse:
        records = run_judge(
            project,
            backend_spec=body.backend,
            conditions=_parse_conditions(body.conditions),
            describe_run_id=body.describe_run_id,
        )
        return JudgeResponse(runs=[_run_out(r) for r in records])

    @app.post("/pipeline/evaluate", response_model=RunOut)
    def pipeline_evaluate(body: EvaluateRequest) -> RunOut:
        record = run_evaluate(
            project,
            conditions=_parse_conditions(body.conditions),
            judge_run_ids=body.judge_run_ids,
        )
        return _run_out(record)

    # --- runs ------------------------------------------------------------------

    @app.get("/runs", response_model=RunListOut)
    def list_runs(kind: str | None = None, condition: str | None = None) -> RunListOut:
        runs = []
        for entry in project.run_registry():
            if kind is not None and entry["kind"] != kind:
                continue
            if condition is not None and entry.get("condition") != condition:
                continue
            run_dir = RunDir(project.paths.run_dir(entry["run_id"]))
            if run_dir.exists():
                runs.append(_run_out(run_dir.load()))
        return RunListOut(runs=runs)

    @app.get("/runs/{run_id}", response_model=RunOut)
    def get_run(run_id: str) -> RunOut:
        return _run_out(RunDir(project.paths.run_dir(run_id)).load())

    @app.get("/runs/{run_id}/files")
    def run_files(run_id: str) -> dict:
        run_dir = RunDir(project.paths.run_dir(run_id))
        if not run_dir.exists():
            raise NotFoundError(f"run not found: {run_id}")
        files = sorted(
            str(p.relative_to(run_dir.path))
            for p in run_dir.path.rglob("*")
            if p.is_file()
        )
        return {"run_id": run_id, "files": files}

    @app.get("/runs/{run_id}/files/{file_path:path}")
    def run_file(run_id: str, file_path: str) -> FileResponse:
        run_dir = RunDir(project.paths.run_dir(run_id))
        if not run_dir.exists():
            raise NotFoundError(f"run not found: {run_id}")
        base = run_dir.path.resolve()
        target = (base / file_path).resolve()
        if base not in target.parents and target != base:
            raise ValidationError("file path escapes the run directory", field_path="file_path")
        if not target.is_file():
            raise NotFoundError(f"run {run_id} has no file {file_path!r}")
        media_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        return FileResponse(target, media_type=media_type)

    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
