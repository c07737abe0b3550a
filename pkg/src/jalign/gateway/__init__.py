"""Model gateway: backends, journaling, bounded parallel invocation."""

from jalign.gateway.config import (
    MOCK_BACKEND,
    BackendConfig,
    BackendKind,
    DecodingParams,
    RetryPolicy,
    WireDialect,
)
from jalign.gateway.invoke import Backend, invoke, invoke_many, make_backend
from jalign.gateway.journal import RunJournal
from jalign.gateway.mock import MockBackend, judge_cues, mock_judge, synthesize_description
from jalign.gateway.requests import MediaItem, ModelRequest, ModelResponse
from jalign.gateway.wire import WireBackend

__all__ = [
    "Backend",
    "BackendConfig",
    "BackendKind",
    "DecodingParams",
    "MOCK_BACKEND",
    "MediaItem",
    "MockBackend",
    "ModelRequest",
    "ModelResponse",
    "RetryPolicy",
    "RunJournal",
    "WireBackend",
    "WireDialect",
    "invoke",
    "invoke_many",
    "judge_cues",
    "make_backend",
    "mock_judge",
    "synthesize_description",
]
