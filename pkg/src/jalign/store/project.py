"""Project layout on disk and the Project accessor."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from jalign.core.segmentation import segment_video
from jalign.core.types import SegmentRef, VideoRecord
from jalign.errors import NotFoundError, ValidationError
from jalign.prompts.exemplars import builtin_exemplars
from jalign.prompts.types import Exemplar
from jalign.store.canonical import read_jsonl, write_atomic, canonical_jsonl_line
from jalign.store.config import ProjectConfig, default_config, load_config, save_config
from jalign.store.families import (
    ProjectManifest,
    load_exemplars,
    load_manifest,
    save_exemplars,
    save_manifest,
    validate_manifest_doc,
)


def path_slug(value: str) -> str:
    """File-system safe identifier piece."""
    return re.sub(r"[^A-Za-z0-9._-]", "_", value)


@dataclass(frozen=True)
class ProjectPaths:
    root: Path

    @property
    def manifest(self) -> Path:
        return self.root / "manifest.json"

    @property
    def config(self) -> Path:
        return self.root / "config.json"

    @property
    def annotations_dir(self) -> Path:
        return self.root / "annotations"

    @property
    def sessions_dir(self) -> Path:
        return self.annotations_dir / "_sessions"

    @property
    def exemplars_file(self) -> Path:
        return self.root / "exemplars" / "library.jsonl"

    @property
    def runs_dir(self) -> Path:
        return self.root / "runs"

    @property
    def runs_index(self) -> Path:
        return self.runs_dir / "index.jsonl"

    def annotation_file(self, rater_id: str, video_id: str) -> Path:
        return self.annotations_dir / path_slug(rater_id) / f"{path_slug(video_id)}.jsonl"

    def session_file(self, session_id: str) -> Path:
        return self.sessions_dir / f"{path_slug(session_id)}.json"

    def run_dir(self, run_id: str) -> Path:
        return self.runs_dir / run_id


class Project:
    """Accessor for one project directory; caches nothing across mutations."""

    def __init__(self, root: str | Path):
        self.paths = ProjectPaths(root=Path(root))

    @property
    def root(self) -> Path:
        return self.paths.root

    def is_initialized(self) -> bool:
        return self.paths.manifest.is_file()

    def manifest(self) -> ProjectManifest:
        if not self.paths.manifest.is_file():
            raise NotFoundError(f"project at {self.root} has no manifest; run ingest first")
        return load_manifest(self.paths.manifest)

    def config(self) -> ProjectConfig:
        if not self.paths.config.is_file():
            return default_config()
        return load_config(self.paths.config)

    def ingest(self, manifest_doc: Any) -> ProjectManifest:
        """Validate and install a manifest; seed default config and exemplars."""
        manifest, errors = validate_manifest_doc(manifest_doc)
        if errors:
            raise ValidationError("; ".join(errors), field_path="manifest")
        self.root.mkdir(parents=True, exist_ok=True)
        save_manifest(self.paths.manifest, manifest)
        if not self.paths.config.is_file():
            save_config(self.paths.config, default_config())
        if not self.paths.exemplars_file.is_file():
            save_exemplars(self.paths.exemplars_file, builtin_exemplars())
        self.paths.annotations_dir.mkdir(parents=True, exist_ok=True)
        self.paths.runs_dir.mkdir(parents=True, exist_ok=True)
        return manifest

    def video(self, video_id: str) -> VideoRecord:
        record = self.manifest().video(video_id)
        if record is None:
            raise NotFoundError(f"unknown video: {video_id!r}")
        return record

    def segments_for(self, video: VideoRecord) -> list[SegmentRef]:
        rule = self.manifest().segment_rule
        return segment_video(video.duration_s, video_id=video.video_id, rule=rule)

    def exemplars(self) -> list[Exemplar]:
        if not self.paths.exemplars_file.is_file():
            return []
        return load_exemplars(self.paths.exemplars_file)

    def raters(self) -> list[str]:
        if not self.paths.annotations_dir.is_dir():
            return []
        return sorted(
            p.name
            for p in self.paths.annotations_dir.iterdir()
            if p.is_dir() and not p.name.startswith("_")
        )

    # Run registry: append-only, deterministic ordering without timestamps.

    def register_run(self, run_id: str, kind: str, condition: str | None) -> None:
        entries = self.run_registry()
        if any(e["run_id"] == run_id for e in entries):
            return
        entries.append({"run_id": run_id, "kind": kind, "condition": condition, "seq": len(entries)})
        data = "".join(canonical_jsonl_line(e) + "\n" for e in entries).encode("utf-8")
        write_atomic(self.paths.runs_index, data)

    def run_registry(self) -> list[dict]:
        if not self.paths.runs_index.is_file():
            return []
        return list(read_jsonl(self.paths.runs_index))

    def latest_run_id(self, kind: str, condition: str | None = None) -> str | None:
        for entry in reversed(self.run_registry()):
            if entry["kind"] != kind:
                continue
            if condition is not None and entry.get("condition") != condition:
                continue
            return entry["run_id"]
        return None
