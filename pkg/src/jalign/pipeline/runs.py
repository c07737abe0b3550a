"""Run records and content-addressed run directories."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping

from jalign.errors import NotFoundError
from jalign.store.canonical import doc_hash, read_json, write_json
from jalign.store.families import check_schema_version

EPOCH_ISO = "1970-01-01T00:00:00Z"

_RUN_KEYS = (
    "schema_version",
    "run_id",
    "kind",
    "condition",
    "model_name",
    "backend_id",
    "created_at",
    "config_hash",
    "input_hashes",
    "artifacts",
    "sealed",
    "failures",
    "warnings",
)


def timestamp(deterministic: bool) -> str:
    """Wall clock for wire runs; a fixed epoch for deterministic (mock) runs."""
    if deterministic:
        return EPOCH_ISO
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def compute_run_id(
    kind: str,
    condition: str | None,
    input_hashes: Mapping[str, str],
    config_hash: str,
) -> str:
    digest = doc_hash(
        {
            "kind": kind,
            "condition": condition,
            "input_hashes": dict(input_hashes),
            "config_hash": config_hash,
        }
    )[:12]
    middle = f"-{condition}" if condition else ""
    return f"{kind}{middle}-{digest}"


@dataclass
class RunRecord:
    run_id: str
    kind: str
    condition: str | None
    model_name: str
    backend_id: str
    created_at: str
    config_hash: str
    input_hashes: dict[str, str]
    artifacts: list[str] = field(default_factory=list)
    sealed: bool = False
    failures: list[dict[str, Any]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def to_doc(self) -> dict[str, Any]:
        doc = dict(self.extra)
        doc.update(
            schema_version=1,
            run_id=self.run_id,
            kind=self.kind,
            condition=self.condition,
            model_name=self.model_name,
            backend_id=self.backend_id,
            created_at=self.created_at,
            config_hash=self.config_hash,
            input_hashes=self.input_hashes,
            artifacts=self.artifacts,
            sealed=self.sealed,
            failures=self.failures,
            warnings=self.warnings,
        )
        return doc

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any], label: str = "run") -> "RunRecord":
        check_schema_version(doc, label)
        return cls(
            run_id=doc["run_id"],
            kind=doc["kind"],
            condition=doc.get("condition"),
            model_name=doc.get("model_name", ""),
            backend_id=doc.get("backend_id", ""),
            created_at=doc.get("created_at", EPOCH_ISO),
            config_hash=doc.get("config_hash", ""),
            input_hashes=dict(doc.get("input_hashes", {})),
            artifacts=list(doc.get("artifacts", [])),
            sealed=bool(doc.get("sealed", False)),
            failures=list(doc.get("failures", [])),
            warnings=list(doc.get("warnings", [])),
            extra={k: v for k, v in doc.items() if k not in _RUN_KEYS},
        )


class RunDir:
    """Filesystem layout of one run directory."""

    def __init__(self, path: Path):
        self.path = path

    @property
    def record_file(self) -> Path:
        return self.path / "run.json"

    @property
    def journal_file(self) -> Path:
        return self.path / "journal.jsonl"

    @property
    def descriptions_file(self) -> Path:
        return self.path / "descriptions.jsonl"

    @property
    def judgements_file(self) -> Path:
        return self.path / "judgements.jsonl"

    @property
    def reports_dir(self) -> Path:
        return self.path / "reports"

    def exists(self) -> bool:
        return self.record_file.is_file()

    def is_sealed(self) -> bool:
        return self.exists() and self.load().sealed

    def load(self) -> RunRecord:
        if not self.record_file.is_file():
            raise NotFoundError(f"no run record at {self.record_file}")
        return RunRecord.from_doc(read_json(self.record_file), label=str(self.record_file))

    def save(self, record: RunRecord) -> None:
        self.path.mkdir(parents=True, exist_ok=True)
        write_json(self.record_file, record.to_doc())
