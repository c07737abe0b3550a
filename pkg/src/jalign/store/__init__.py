"""Datastore: canonical serialization, document families, project layout."""

from jalign.store.canonical import (
    canonical_json_bytes,
    canonical_jsonl_bytes,
    doc_hash,
    read_json,
    read_jsonl,
    sha256_hex,
    write_atomic,
    write_json,
    write_jsonl,
)
from jalign.store.config import (
    MediaSlicerConfig,
    ProjectConfig,
    PromptSettings,
    default_config,
    load_config,
    save_config,
)
from jalign.store.families import (
    SCHEMA_VERSION,
    ProjectManifest,
    check_schema_version,
    load_exemplars,
    load_intervals,
    load_judgements,
    load_label_set,
    load_manifest,
    load_records,
    save_exemplars,
    save_intervals,
    save_label_set,
    save_manifest,
    save_records,
    validate_manifest_doc,
)
from jalign.store.project import Project, ProjectPaths, path_slug

__all__ = [
    "MediaSlicerConfig",
    "Project",
    "ProjectConfig",
    "ProjectManifest",
    "ProjectPaths",
    "PromptSettings",
    "SCHEMA_VERSION",
    "canonical_json_bytes",
    "canonical_jsonl_bytes",
    "check_schema_version",
    "default_config",
    "doc_hash",
    "load_config",
    "load_exemplars",
    "load_intervals",
    "load_judgements",
    "load_label_set",
    "load_manifest",
    "load_records",
    "path_slug",
    "read_json",
    "read_jsonl",
    "save_config",
    "save_exemplars",
    "save_intervals",
    "save_label_set",
    "save_manifest",
    "save_records",
    "sha256_hex",
    "validate_manifest_doc",
    "write_atomic",
    "write_json",
    "write_jsonl",
]
