"""Backend, decoding and retry configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

from jalign.errors import ConfigurationError, InvalidInputError


class BackendKind(str, Enum):
    WIRE_API = "wire_api"
    MOCK = "mock"


class WireDialect(str, Enum):
    """Request/response shape spoken by a wire_api endpoint."""

    OPENAI_CHAT = "openai_chat"
    GENERIC_JSON = "generic_json"


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    base_backoff_ms: float = 250.0

    def __post_init__(self):
        if self.max_attempts < 1:
            raise InvalidInputError("max_attempts must be >= 1")
        if self.base_backoff_ms < 0:
            raise InvalidInputError("base_backoff_ms must be >= 0")

    def backoff_s(self, attempt: int) -> float:
        """Exponential backoff before retrying after the given 1-based attempt."""
        return self.base_backoff_ms * (2 ** (attempt - 1)) / 1000.0


@dataclass(frozen=True)
class DecodingParams:
    temperature: float = 0.0
    max_output_tokens: int = 4096

    def __post_init__(self):
        if self.temperature < 0:
            raise InvalidInputError("temperature must be >= 0")
        if self.max_output_tokens < 1:
            raise InvalidInputError("max_output_tokens must be >= 1")


@dataclass(frozen=True)
class BackendConfig:
    """One named model backend.

    credential_env names the environment variable holding the secret; the secret
    itself never appears in stored documents.
    """

    kind: BackendKind
    name: str = "mock"
    endpoint: str = ""
    dialect: WireDialect = WireDialect.OPENAI_CHAT
    model_name: str = ""
    credential_env: str | None = None
    max_parallel: int = 1
    timeout_s: float = 60.0
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    decoding: DecodingParams = field(default_factory=DecodingParams)

    def __post_init__(self):
        if self.max_parallel < 1:
            raise InvalidInputError("max_parallel must be >= 1")
        if self.kind is BackendKind.WIRE_API and not self.endpoint:
            raise ConfigurationError(f"backend {self.name!r} is wire_api but has no endpoint")

    def to_doc(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "name": self.name,
            "endpoint": self.endpoint,
            "dialect": self.dialect.value,
            "model_name": self.model_name,
            "credential_env": self.credential_env,
            "max_parallel": self.max_parallel,
            "timeout_s": self.timeout_s,
            "retry": {
                "max_attempts": self.retry.max_attempts,
                "base_backoff_ms": self.retry.base_backoff_ms,
            },
            "decoding": {
                "temperature": self.decoding.temperature,
                "max_output_tokens": self.decoding.max_output_tokens,
            },
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any], name: str = "") -> "BackendConfig":
        retry_doc = doc.get("retry", {})
        decoding_doc = doc.get("decoding", {})
        return cls(
            kind=BackendKind(doc["kind"]),
            name=doc.get("name") or name or "backend",
            endpoint=doc.get("endpoint", ""),
            dialect=WireDialect(doc.get("dialect", "openai_chat")),
            model_name=doc.get("model_name", ""),
            credential_env=doc.get("credential_env"),
            max_parallel=int(doc.get("max_parallel", 1)),
            timeout_s=float(doc.get("timeout_s", 60.0)),
            retry=RetryPolicy(
                max_attempts=int(retry_doc.get("max_attempts", 3)),
                base_backoff_ms=float(retry_doc.get("base_backoff_ms", 250.0)),
            ),
            decoding=DecodingParams(
                temperature=float(decoding_doc.get("temperature", 0.0)),
                max_output_tokens=int(decoding_doc.get("max_output_tokens", 4096)),
            ),
        )


MOCK_BACKEND = BackendConfig(kind=BackendKind.MOCK, name="mock", model_name="mock-expert")
