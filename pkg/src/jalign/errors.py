"""Typed errors shared across the toolkit.

Every error carries a machine-readable ``kind`` used by the HTTP boundary to pick a
status code and by the CLI to pick an exit code.
"""

from __future__ import annotations


class JalignError(Exception):
    """Base class for all toolkit errors."""

    kind = "validation"


class InvalidInputError(JalignError):
    """An operation precondition was violated."""


class ValidationError(JalignError):
    """A document or request does not match its schema."""

    def __init__(self, message: str, field_path: str | None = None):
        self.field_path = field_path
        super().__init__(message if not field_path else f"{field_path}: {message}")


class VersionError(ValidationError):
    """A document declares a schema_version newer than this build supports."""


class ConfigurationError(JalignError):
    """Required configuration (template, slicer, backend settings) is missing or bad."""


class NotFoundError(JalignError):
    kind = "not_found"


class ConflictError(JalignError):
    kind = "conflict"


class IntervalOverlapError(ConflictError):
    """Two intervals from the same rater overlap on one video.

    Conflict in the domain taxonomy, but surfaced as a validation failure at the
    service boundary, hence the kind override.
    """

    kind = "validation"


class StaleVersionError(ConflictError):
    """An optimistic write carried an expected_version that is no longer current."""


class SealedSessionError(ConflictError):
    """A write targeted a session that was already submitted."""


class CoverageError(JalignError):
    """Generated output and reference data do not cover the same segments/fields."""

    kind = "coverage"

    def __init__(
        self,
        message: str,
        *,
        segment: str | None = None,
        role: str | None = None,
        field: str | None = None,
    ):
        self.segment = segment
        self.role = role
        self.field = field
        super().__init__(message)


class ParseError(JalignError):
    """A model response could not be interpreted. Keeps the raw text for diagnosis."""

    def __init__(self, message: str, raw_text: str | None = None):
        self.raw_text = raw_text
        super().__init__(message)


class StructureError(ParseError):
    """Expected segment or role headings are absent or malformed."""


class FieldMissingError(ParseError):
    """A required cue field is absent from one role's description."""

    def __init__(self, segment_ordinal: int, role: str, field: str, raw_text: str | None = None):
        self.segment_ordinal = segment_ordinal
        self.role = role
        self.field = field
        super().__init__(
            f"segment {segment_ordinal}: {role} description is missing the {field} field",
            raw_text,
        )


class InvalidLabelError(ParseError):
    """A judgement label falls outside the closed three-value set."""

    def __init__(self, value: str, raw_text: str | None = None):
        self.value = value
        super().__init__(f"invalid judgement label: {value!r}", raw_text)


class ExemplarGapError(JalignError):
    """The exemplar library has no eligible exemplar for one label class."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"no eligible exemplar for label {label!r}")


class BackendError(JalignError):
    """A model backend failed."""

    kind = "backend"


class BackendUnavailableError(BackendError):
    """Transient failures persisted through every allowed attempt."""

    def __init__(self, message: str, attempts: int = 0):
        self.attempts = attempts
        super().__init__(message)


class CredentialError(BackendError):
    """Credentials are missing or rejected; retrying cannot help."""
