"""Backend dispatch with journaling and bounded parallelism."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Protocol, Sequence

from jalign.errors import BackendError, JalignError
from jalign.gateway.config import BackendConfig, BackendKind
from jalign.gateway.journal import RunJournal
from jalign.gateway.mock import MockBackend
from jalign.gateway.requests import ModelRequest, ModelResponse
from jalign.gateway.wire import WireBackend


class Backend(Protocol):
    backend_id: str

    def invoke(self, request: ModelRequest) -> ModelResponse: ...


def make_backend(config: BackendConfig) -> Backend:
    if config.kind is BackendKind.MOCK:
        return MockBackend()
    return WireBackend(config)


def invoke(
    request: ModelRequest,
    backend: Backend | BackendConfig,
    journal: RunJournal | None = None,
) -> ModelResponse:
    """Invoke once, writing exactly one journal entry (response or error).

    A journaled successful response for the same request hash is returned as-is
    without touching the backend, which is what makes interrupted runs resumable.
    Journaled errors are not replayed; the request is retried.
    """
    if isinstance(backend, BackendConfig):
        backend = make_backend(backend)
    if journal is not None:
        replayed = journal.replay(request)
        if replayed is not None:
            return replayed
    try:
        response = backend.invoke(request)
    except JalignError as exc:
        if journal is not None:
            journal.record_error(request, exc)
        raise
    if journal is not None:
        journal.record_response(request, response)
    return response


def invoke_many(
    requests: Sequence[ModelRequest],
    backend: Backend | BackendConfig,
    journal: RunJournal | None = None,
    max_parallel: int = 1,
    collect_errors: bool = False,
) -> list[ModelResponse | BackendError]:
    """Invoke a batch with at most max_parallel requests in flight.

    Results come back in request order. With collect_errors, backend failures are
    returned in place of responses instead of aborting the batch; other error types
    always propagate.
    """
    if max_parallel < 1:
        raise ValueError("max_parallel must be >= 1")
    if isinstance(backend, BackendConfig):
        backend = make_backend(backend)

    def one(request: ModelRequest) -> ModelResponse | BackendError:
        try:
            return invoke(request, backend, journal)
        except BackendError as exc:
            if collect_errors:
                return exc
            raise

    if not requests:
        return []
    if max_parallel == 1:
        return [one(r) for r in requests]
    with ThreadPoolExecutor(max_workers=max_parallel) as pool:
        return list(pool.map(one, requests))
