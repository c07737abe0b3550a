"""Annotation sessions: optimistic versioning, sealing and submission."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

from jalign.core.mapping import map_intervals_to_segments, validate_intervals
from jalign.core.types import IntervalAnnotation, SegmentLabelSet
from jalign.errors import (
    NotFoundError,
    SealedSessionError,
    StaleVersionError,
    ValidationError,
)
from jalign.store.canonical import read_json, write_json, write_jsonl
from jalign.store.families import check_schema_version, interval_to_row, row_to_interval
from jalign.store.project import Project, path_slug

_SESSION_KEYS = (
    "schema_version",
    "session_id",
    "rater_id",
    "video_id",
    "version",
    "sealed",
    "intervals",
    "notes",
)


def session_id_for(rater_id: str, video_id: str) -> str:
    return f"{path_slug(rater_id)}--{path_slug(video_id)}"


@dataclass(frozen=True)
class Session:
    """One rater's in-progress annotation of one video."""

    session_id: str
    rater_id: str
    video_id: str
    version: int
    sealed: bool
    intervals: tuple[IntervalAnnotation, ...]
    notes: str = ""
    extra: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def to_doc(self) -> dict[str, Any]:
        doc = dict(self.extra)
        doc.update(
            schema_version=1,
            session_id=self.session_id,
            rater_id=self.rater_id,
            video_id=self.video_id,
            version=self.version,
            sealed=self.sealed,
            intervals=[interval_to_row(iv) for iv in self.intervals],
            notes=self.notes,
        )
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any], label: str = "session") -> "Session":
        check_schema_version(doc, label)
        return cls(
            session_id=doc["session_id"],
            rater_id=doc["rater_id"],
            video_id=doc["video_id"],
            version=int(doc.get("version", 0)),
            sealed=bool(doc.get("sealed", False)),
            intervals=tuple(
                row_to_interval(row, label=f"{label}.intervals[{i}]")
                for i, row in enumerate(doc.get("intervals", []))
            ),
            notes=str(doc.get("notes", "")),
            extra={k: v for k, v in doc.items() if k not in _SESSION_KEYS},
        )


class SessionStore:
    """Session persistence under annotations/_sessions/."""

    def __init__(self, project: Project):
        self.project = project

    def _path(self, session_id: str):
        return self.project.paths.session_file(session_id)

    def create_or_get(self, rater_id: str, video_id: str) -> Session:
        """Idempotent open: returns the existing session when one exists."""
        if not rater_id.strip():
            raise ValidationError("rater_id must be non-empty", field_path="rater_id")
        self.project.video(video_id)  # raises NotFoundError for unknown videos
        session_id = session_id_for(rater_id, video_id)
        path = self._path(session_id)
        if path.is_file():
            return Session.from_doc(read_json(path), label=session_id)
        session = Session(
            session_id=session_id,
            rater_id=rater_id,
            video_id=video_id,
            version=0,
            sealed=False,
            intervals=(),
        )
        write_json(path, session.to_doc())
        return session

    def get(self, session_id: str) -> Session:
        path = self._path(session_id)
        if not path.is_file():
            raise NotFoundError(f"unknown session: {session_id!r}")
        return Session.from_doc(read_json(path), label=session_id)

    def _check_writable(self, session: Session, expected_version: int) -> None:
        if session.sealed:
            raise SealedSessionError(
                f"session {session.session_id} was already submitted"
            )
        if expected_version != session.version:
            raise StaleVersionError(
                f"session {session.session_id} is at version {session.version}, "
                f"write expected {expected_version}"
            )

    def put_intervals(
        self,
        session_id: str,
        *,
        expected_version: int,
        intervals: Sequence[IntervalAnnotation],
        notes: str | None = None,
    ) -> Session:
        session = self.get(session_id)
        self._check_writable(session, expected_version)
        video = self.project.video(session.video_id)
        validate_intervals(
            intervals,
            video_id=session.video_id,
            duration_s=video.duration_s,
        )
        ordered = tuple(sorted(intervals, key=lambda iv: iv.start_s))
        updated = replace(
            session,
            intervals=ordered,
            version=session.version + 1,
            notes=session.notes if notes is None else notes,
        )
        write_json(self._path(session_id), updated.to_doc())
        return updated

    def submit(self, session_id: str, *, expected_version: int) -> Session:
        """Seal the session and publish its intervals as the rater's annotations."""
        session = self.get(session_id)
        self._check_writable(session, expected_version)
        sealed = replace(session, sealed=True, version=session.version + 1)
        out_path = self.project.paths.annotation_file(session.rater_id, session.video_id)
        write_jsonl(out_path, [interval_to_row(iv) for iv in sealed.intervals])
        write_json(self._path(session_id), sealed.to_doc())
        return sealed

    def projection(self, session_id: str) -> SegmentLabelSet:
        """Current segment labels implied by the session's intervals."""
        session = self.get(session_id)
        video = self.project.video(session.video_id)
        segments = self.project.segments_for(video)
        return map_intervals_to_segments(
            session.intervals, segments, rater_id=session.rater_id
        )
