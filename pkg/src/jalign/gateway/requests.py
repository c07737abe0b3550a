"""Model request/response values and content-addressed request hashing."""

from __future__ import annotations

from dataclasses import dataclass, field

from jalign.errors import InvalidInputError
from jalign.gateway.config import DecodingParams
from jalign.prompts.types import PromptStage, RenderedPrompt
from jalign.store.canonical import doc_hash


@dataclass(frozen=True)
class MediaItem:
    """One media attachment (a per-segment clip) for a describe request."""

    segment_id: str
    locator: str

    def __post_init__(self):
        if not self.segment_id or not self.locator:
            raise InvalidInputError("media items need a segment_id and a locator")


@dataclass(frozen=True)
class ModelRequest:
    """One backend invocation. Judge requests are text-only by construction."""

    prompt: RenderedPrompt
    model_name: str
    decoding: DecodingParams = field(default_factory=DecodingParams)
    media: tuple[MediaItem, ...] = ()

    def __post_init__(self):
        if not self.model_name:
            raise InvalidInputError("model_name must be non-empty")
        if self.prompt.stage is PromptStage.JUDGE and self.media:
            raise InvalidInputError("judge requests must not carry media")

    @property
    def stage(self) -> PromptStage:
        return self.prompt.stage

    @property
    def request_hash(self) -> str:
        return doc_hash(
            {
                "stage": self.prompt.stage.value,
                "condition": self.prompt.condition.slug if self.prompt.condition else None,
                "prompt_text": self.prompt.text,
                "segment_ids": list(self.prompt.segment_ids),
                "model_name": self.model_name,
                "temperature": self.decoding.temperature,
                "max_output_tokens": self.decoding.max_output_tokens,
                "media": [[m.segment_id, m.locator] for m in self.media],
            }
        )


@dataclass(frozen=True)
class ModelResponse:
    raw_text: str
    backend_id: str
    attempt_count: int = 1
    latency_ms: float = 0.0

    def __post_init__(self):
        if self.attempt_count < 1:
            raise InvalidInputError("attempt_count must be >= 1")
