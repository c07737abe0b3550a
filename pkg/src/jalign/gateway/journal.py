"""Append-only run journal: every backend invocation leaves exactly one entry."""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Any

from jalign.errors import JalignError
from jalign.gateway.requests import ModelRequest, ModelResponse
from jalign.store.canonical import canonical_jsonl_line, read_jsonl


class RunJournal:
    """JSONL journal keyed by request hash.

    Entries are written before results are used (journal-first), so an interrupted
    run can resume by replaying successful entries and retrying failed ones. The
    journal is the audit trail: replaying it reproduces every parsed output with no
    backend access.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._by_hash: dict[str, dict[str, Any]] = {}
        self._count = 0
        if self.path.is_file():
            for entry in read_jsonl(self.path):
                self._count += 1
                self._by_hash[entry["request_hash"]] = entry

    def __len__(self) -> int:
        return self._count

    def _append(self, entry: dict[str, Any]) -> None:
        with self._lock:
            entry["seq"] = self._count
            line = canonical_jsonl_line(entry) + "\n"
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
            self._count += 1
            self._by_hash[entry["request_hash"]] = entry

    def record_response(self, request: ModelRequest, response: ModelResponse) -> None:
        self._append(
            {
                "kind": "response",
                "stage": request.stage.value,
                "request_hash": request.request_hash,
                "segment_ids": list(request.prompt.segment_ids),
                "condition": request.prompt.condition.slug if request.prompt.condition else None,
                "model_name": request.model_name,
                "backend_id": response.backend_id,
                "attempt_count": response.attempt_count,
                "latency_ms": response.latency_ms,
                "raw_text": response.raw_text,
            }
        )

    def record_error(self, request: ModelRequest, error: JalignError) -> None:
        self._append(
            {
                "kind": "error",
                "stage": request.stage.value,
                "request_hash": request.request_hash,
                "segment_ids": list(request.prompt.segment_ids),
                "condition": request.prompt.condition.slug if request.prompt.condition else None,
                "model_name": request.model_name,
                "error": type(error).__name__,
                "error_kind": error.kind,
                "message": str(error),
            }
        )

    def lookup(self, request_hash: str) -> dict[str, Any] | None:
        """The latest entry for the hash, success or error."""
        return self._by_hash.get(request_hash)

    def replay(self, request: ModelRequest) -> ModelResponse | None:
        """A previously journaled successful response for this request, if any."""
        entry = self._by_hash.get(request.request_hash)
        if entry is None or entry.get("kind") != "response":
            return None
        return ModelResponse(
            raw_text=entry["raw_text"],
            backend_id=entry["backend_id"],
            attempt_count=int(entry["attempt_count"]),
            latency_ms=float(entry["latency_ms"]),
        )
