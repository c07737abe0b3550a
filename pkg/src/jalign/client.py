"""Async client for the service API.

Runs either against a live server (``base_url``) or fully in-process over the
ASGI app (``project_root``), which needs no sockets and keeps CLI runs
deterministic and offline.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping, Sequence

import httpx

from jalign.errors import InvalidInputError


class ServiceError(Exception):
    """Non-2xx response from the service, carrying its error kind."""

    def __init__(self, status_code: int, kind: str, message: str):
        self.status_code = status_code
        self.kind = kind
        super().__init__(message)


class JaClient:
    def __init__(
        self,
        *,
        project_root: str | Path | None = None,
        base_url: str | None = None,
    ):
        if (project_root is None) == (base_url is None):
            raise InvalidInputError("pass exactly one of project_root or base_url")
        if project_root is not None:
            from jalign.service.app import create_app

            transport = httpx.ASGITransport(app=create_app(project_root))
            self._client = httpx.AsyncClient(
                transport=transport, base_url="http://jalign.internal"
            )
        else:
            self._client = httpx.AsyncClient(base_url=base_url, timeout=300.0)

    async def __aenter__(self) -> "JaClient":
        return self

    async def __aexit__(self, *exc_info) -> None:
        await self.close()

    async def close(self) -> None:
        await self._client.aclose()

    async def _request(self, method: str, url: str, **kwargs) -> Any:
        response = await self._client.request(method, url, **kwargs)
        if response.status_code >= 400:
            try:
                body = response.json()
                kind = body.get("error", "unknown")
                message = body.get("message", response.text)
            except ValueError:
                kind, message = "unknown", response.text
            raise ServiceError(response.status_code, kind, message)
        if response.headers.get("content-type", "").startswith("application/json"):
            return response.json()
        return response.content

    # --- videos ---------------------------------------------------------

    async def health(self) -> dict:
        return await self._request("GET", "/health")

    async def list_videos(self) -> list[dict]:
        return await self._request("GET", "/videos")

    async def video_segments(self, video_id: str) -> list[dict]:
        return await self._request("GET", f"/videos/{video_id}/segments")

    # --- sessions ---------------------------------------------------------

    async def create_session(self, rater_id: str, video_id: str) -> dict:
        return await self._request(
            "POST", "/sessions", json={"rater_id": rater_id, "video_id": video_id}
        )

    async def get_session(self, session_id: str) -> dict:
        return await self._request("GET", f"/sessions/{session_id}")

    async def get_intervals(self, session_id: str) -> dict:
        return await self._request("GET", f"/sessions/{session_id}/intervals")

    async def put_intervals(
        self,
        session_id: str,
        *,
        expected_version: int,
        intervals: Sequence[Mapping[str, Any]],
        notes: str | None = None,
    ) -> dict:
        return await self._request(
            "PUT",
            f"/sessions/{session_id}/intervals",
            json={
                "expected_version": expected_version,
                "intervals": list(intervals),
                "notes": notes,
            },
        )

    async def submit_session(self, session_id: str, *, expected_version: int) -> dict:
        return await self._request(
            "POST",
            f"/sessions/{session_id}/submit",
            json={"expected_version": expected_version},
        )

    async def projection(self, session_id: str) -> dict:
        return await self._request("GET", f"/sessions/{session_id}/projection")

    # --- pipeline ---------------------------------------------------------

    async def ingest(self, manifest: Mapping[str, Any]) -> dict:
        return await self._request(
            "POST", "/pipeline/ingest", json={"manifest": dict(manifest)}
        )

    async def describe(
        self, *, backend: str = "mock", video_ids: Sequence[str] | None = None
    ) -> dict:
        return await self._request(
            "POST",
            "/pipeline/describe",
            json={
                "backend": backend,
                "video_ids": list(video_ids) if video_ids is not None else None,
            },
        )

    async def judge(
        self,
        *,
        backend: str = "mock",
        conditions: Sequence[str] | None = None,
        describe_run_id: str | None = None,
    ) -> dict:
        return await self._request(
            "POST",
            "/pipeline/judge",
            json={
                "backend": backend,
                "conditions": list(conditions) if conditions is not None else None,
                "describe_run_id": describe_run_id,
            },
        )

    async def evaluate(
        self,
        *,
        conditions: Sequence[str] | None = None,
        judge_run_ids: Mapping[str, str] | None = None,
    ) -> dict:
        return await self._request(
            "POST",
            "/pipeline/evaluate",
            json={
                "conditions": list(conditions) if conditions is not None else None,
                "judge_run_ids": dict(judge_run_ids) if judge_run_ids else None,
            },
        )

    # --- runs ---------------------------------------------------------------

    async def list_runs(
        self, *, kind: str | None = None, condition: str | None = None
    ) -> dict:
        params = {}
        if kind is not None:
            params["kind"] = kind
        if condition is not None:
            params["condition"] = condition
        return await self._request("GET", "/runs", params=params)

    async def get_run(self, run_id: str) -> dict:
        return await self._request("GET", f"/runs/{run_id}")

    async def run_files(self, run_id: str) -> dict:
        return await self._request("GET", f"/runs/{run_id}/files")

    async def download(self, run_id: str, file_path: str) -> bytes:
        """Fetch one run artifact byte-for-byte."""
        response = await self._client.get(f"/runs/{run_id}/files/{file_path}")
        if response.status_code >= 400:
            try:
                body = response.json()
                raise ServiceError(
                    response.status_code,
                    body.get("error", "unknown"),
                    body.get("message", response.text),
                )
            except ValueError:
                raise ServiceError(response.status_code, "unknown", response.text)
        return response.content
