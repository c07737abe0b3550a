"""HTTP wire backend with retry, backoff and credential handling."""

from __future__ import annotations

import os
import time
from typing import Any, Callable

import httpx

from jalign.errors import (
    BackendError,
    BackendUnavailableError,
    ConfigurationError,
    CredentialError,
)
from jalign.gateway.config import BackendConfig, BackendKind, WireDialect
from jalign.gateway.requests import ModelRequest, ModelResponse

_TRANSIENT_STATUS = frozenset({408, 429, 500, 502, 503, 504})


class WireBackend:
    """Talks to a remote model endpoint in one of the supported dialects."""

    def __init__(
        self,
        config: BackendConfig,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if config.kind is not BackendKind.WIRE_API:
            raise ConfigurationError(f"backend {config.name!r} is not a wire_api backend")
        self.config = config
        self.backend_id = f"wire:{config.name}"
        self._sleep = sleep
        self._client = httpx.Client(timeout=config.timeout_s, transport=transport)

    def close(self) -> None:
        self._client.close()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.credential_env:
            token = os.environ.get(self.config.credential_env)
            if not token:
                raise CredentialError(
                    f"environment variable {self.config.credential_env} is not set"
                )
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def _body(self, request: ModelRequest) -> dict[str, Any]:
        if self.config.dialect is WireDialect.OPENAI_CHAT:
            if request.media:
                raise ConfigurationError(
                    "the openai_chat dialect here is text-only; use generic_json "
                    "for media-bearing describe requests"
                )
            return {
                "model": request.model_name,
                "temperature": request.decoding.temperature,
                "max_tokens": request.decoding.max_output_tokens,
                "messages": [{"role": "user", "content": request.prompt.text}],
            }
        return {
            "model": request.model_name,
            "temperature": request.decoding.temperature,
            "max_output_tokens": request.decoding.max_output_tokens,
            "prompt": request.prompt.text,
            "media": [
                {"segment_id": m.segment_id, "uri": m.locator} for m in request.media
            ],
        }

    def _extract_text(self, payload: Any) -> str:
        try:
            if self.config.dialect is WireDialect.OPENAI_CHAT:
                return payload["choices"][0]["message"]["content"]
            return payload["text"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"response body has no completion text: {exc!r}") from exc

    def invoke(self, request: ModelRequest) -> ModelResponse:
        headers = self._headers()  # missing credentials fail before any attempt
        body = self._body(request)
        retry = self.config.retry
        last_error = "no attempts made"
        started = time.monotonic()
        for attempt in range(1, retry.max_attempts + 1):
            try:
                response = self._client.post(self.config.endpoint, json=body, headers=headers)
            except httpx.HTTPError as exc:
                last_error = f"transport error: {exc}"
            else:
                if response.status_code in (401, 403):
                    raise CredentialError(
                        f"backend rejected credentials with HTTP {response.status_code}"
                    )
                if response.status_code == 200:
                    text = self._extract_text(response.json())
                    latency_ms = (time.monotonic() - started) * 1000.0
                    return ModelResponse(
                        raw_text=text,
                        backend_id=self.backend_id,
                        attempt_count=attempt,
                        latency_ms=latency_ms,
                    )
                if response.status_code not in _TRANSIENT_STATUS:
                    raise BackendError(
                        f"backend returned HTTP {response.status_code}: {response.text[:200]}"
                    )
                last_error = f"HTTP {response.status_code}"
            if attempt < retry.max_attempts:
                self._sleep(retry.backoff_s(attempt))
        raise BackendUnavailableError(
            f"backend unavailable after {retry.max_attempts} attempts ({last_error})",
            attempts=retry.max_attempts,
        )
