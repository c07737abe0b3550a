"""Canonical JSON/JSONL bytes, content hashing and atomic writes.

Documents always serialize the same way (sorted keys, fixed separators, UTF-8,
trailing newline) so hashes and byte comparisons are meaningful.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Iterator

from jalign.errors import ValidationError


def canonical_json_bytes(doc: Any) -> bytes:
    text = json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2, allow_nan=False)
    return (text + "\n").encode("utf-8")


def canonical_jsonl_line(row: Any) -> str:
    return json.dumps(row, ensure_ascii=False, sort_keys=True, separators=(",", ":"), allow_nan=False)


def canonical_jsonl_bytes(rows: Iterable[Any]) -> bytes:
    return "".join(canonical_jsonl_line(row) + "\n" for row in rows).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def doc_hash(doc: Any) -> str:
    return sha256_hex(canonical_json_bytes(doc))


def write_atomic(path: Path, data: bytes) -> None:
    """Write via a sibling temp file and rename, so readers never see a torn file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def write_json(path: Path, doc: Any) -> None:
    write_atomic(path, canonical_json_bytes(doc))


def write_jsonl(path: Path, rows: Iterable[Any]) -> None:
    write_atomic(path, canonical_jsonl_bytes(rows))


def read_json(path: Path) -> Any:
    try:
        raw = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}", field_path=str(path)) from exc


def read_jsonl(path: Path) -> Iterator[Any]:
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(
                    f"malformed JSONL: {exc}", field_path=f"{path}:{lineno}"
                ) from exc
