"""Lenient parsers for model responses.

Models drift: they add markdown bullets and bold markers, vary label casing, spell
Judgement both ways, and restate timestamps in headings. The parsers tolerate that
drift but never guess: anything missing or outside the closed label set raises a
typed error, and nothing is silently dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from jalign.core.labels import JudgementLabel, Role
from jalign.core.types import SegmentRef
from jalign.errors import (
    FieldMissingError,
    ParseError,
    StructureError,
)
from jalign.prompts.types import (
    BehaviourRecord,
    JudgementOutput,
    ParticipantDescription,
    PromptCondition,
    PromptStyle,
)

# "Segment 3", "**Segment 3 (00:10–00:15):**", "- Segment 3:" ... heading lines only;
# a trailing value (as in "Segment 3: Strong") disqualifies the line as a heading.
_SEGMENT_HEADING = re.compile(
    r"^\s*(?:[-*•]\s*)?(?:#+\s*)?(?:\*\*)?\s*segment\s+(\d+)"
    r"(?:\s*\([^)]*\))?\s*:?\s*(?:\*\*)?\s*$",
    re.IGNORECASE,
)

_ROLE_HEADING = re.compile(
    r"^\s*(?:[-*•]\s*)?(?:#+\s*)?(?:\*\*)?\s*(parent|child)\s*(?:\*\*)?\s*:?\s*(?:\*\*)?\s*$",
    re.IGNORECASE,
)

# "Gaze: ...", "- **Action:** ...", "3. Vocalization: ..." inside a role section.
_FIELD_LINE = re.compile(
    r"^\s*(?:[-*•]\s*)?(?:\d+\.\s*)?(?:\*\*)?\s*"
    r"(gaze|action|vocalisation|vocalization|engagement)\s*(?:\*\*)?\s*:\s*(.*)$",
    re.IGNORECASE,
)

# "Segment 1: Strong", "- Segment 2 - [Moderate]", "**Segment 3:** poor."
_PLAIN_JUDGEMENT = re.compile(
    r"^\s*(?:[-*•]\s*)?(?:\*\*)?\s*segment\s+(\d+)\s*(?:\*\*)?\s*[:\-–]\s*(?:\*\*)?\s*"
    r"\[?\s*([A-Za-z]+)\s*\]?\s*\.?\s*(?:\*\*)?\s*$",
    re.IGNORECASE,
)

_TRIPLE_FIELD = re.compile(
    r"^\s*(?:[-*•]\s*)?(?:\d+\.\s*)?(?:\*\*)?\s*"
    r"(observation|reasoning|judgement|judgment)\s*(?:\*\*)?\s*:\s*(.*)$",
    re.IGNORECASE,
)

_NONE_TOKEN = re.compile(r"none[.!]?", re.IGNORECASE)


def _clean_value(raw: str) -> str:
    value = raw.strip()
    value = re.sub(r"^\*\*|\*\*$", "", value).strip()
    return value


def _normalise_vocalisation(raw: str) -> str | None:
    value = _clean_value(raw)
    unquoted = value.strip("'\"‘’“”").strip()
    if _NONE_TOKEN.fullmatch(unquoted):
        return None
    return value


def _split_blocks(lines: list[str], heading: re.Pattern) -> list[tuple[int, list[str]]]:
    """Split lines into (number, body) blocks at each heading match."""
    blocks: list[tuple[int, list[str]]] = []
    current: list[str] | None = None
    for line in lines:
        m = heading.match(line)
        if m:
            current = []
            blocks.append((int(m.group(1)), current))
        elif current is not None:
            current.append(line)
    return blocks


def parse_stage1_response(
    text: str,
    segments: Sequence[SegmentRef],
    *,
    require_engagement: bool = False,
) -> list[BehaviourRecord]:
    """Parse a behaviour-description response against the prompt's segment list.

    Segment numbers in the response are 1-based prompt positions. Every prompted
    segment must appear exactly once with both role sections and all cue fields.
    """
    if not text.strip():
        raise ParseError("empty response", text)
    if not segments:
        raise ParseError("no segments supplied for parsing")

    lines = text.splitlines()
    blocks = _split_blocks(lines, _SEGMENT_HEADING)
    if not blocks:
        raise StructureError("no segment headings found in response", text)

    by_position: dict[int, list[str]] = {}
    for position, body in blocks:
        if position < 1 or position > len(segments):
            raise StructureError(
                f"segment {position} is outside the prompt range 1..{len(segments)}", text
            )
        if position in by_position:
            raise StructureError(f"segment {position} appears more than once", text)
        by_position[position] = body

    missing = [str(p) for p in range(1, len(segments) + 1) if p not in by_position]
    if missing:
        raise StructureError(f"response is missing segment(s) {', '.join(missing)}", text)

    records = []
    for position in range(1, len(segments) + 1):
        body = by_position[position]
        roles = _parse_role_sections(body, position, text)
        descriptions = {}
        for role in (Role.PARENT, Role.CHILD):
            if role not in roles:
                raise StructureError(
                    f"segment {position}: no {role.value} section found", text
                )
            descriptions[role] = _build_description(
                roles[role], position, role, text, require_engagement
            )
        _check_sentences(descriptions, position, text)
        records.append(
            BehaviourRecord(
                segment=segments[position - 1],
                parent=descriptions[Role.PARENT],
                child=descriptions[Role.CHILD],
            )
        )
    return records


def _parse_role_sections(body: list[str], position: int, raw: str) -> dict[Role, dict[str, str]]:
    sections: dict[Role, dict[str, str]] = {}
    current: dict[str, str] | None = None
    for line in body:
        role_match = _ROLE_HEADING.match(line)
        if role_match:
            role = Role(role_match.group(1).lower())
            if role in sections:
                raise StructureError(
                    f"segment {position}: duplicate {role.value} section", raw
                )
            current = {}
            sections[role] = current
            continue
        field_match = _FIELD_LINE.match(line)
        if field_match and current is not None:
            name = field_match.group(1).lower()
            if name == "vocalization":
                name = "vocalisation"
            current[name] = field_match.group(2)
    return sections


def _build_description(
    fields: dict[str, str],
    position: int,
    role: Role,
    raw: str,
    require_engagement: bool,
) -> ParticipantDescription:
    for name in ("gaze", "action", "vocalisation"):
        if name not in fields:
            raise FieldMissingError(position, role.value, name, raw)
    if require_engagement and "engagement" not in fields:
        raise FieldMissingError(position, role.value, "engagement", raw)
    engagement = fields.get("engagement")
    return ParticipantDescription(
        gaze=_clean_value(fields["gaze"]),
        action=_clean_value(fields["action"]),
        vocalisation=_normalise_vocalisation(fields["vocalisation"]),
        engagement=_normalise_vocalisation(engagement) if engagement is not None else None,
    )


def _check_sentences(
    descriptions: dict[Role, ParticipantDescription], position: int, raw: str
) -> None:
    # Re-check the subject heuristic here so the failure is a typed parse error
    # that names the segment, rather than a bare constructor failure.
    for role, desc in descriptions.items():
        prefix = f"the {role.value}"
        for name, value in (("gaze", desc.gaze), ("action", desc.action)):
            if not value.lower().startswith(prefix):
                raise StructureError(
                    f"segment {position}: {role.value} {name} does not start with "
                    f"'The {role.value}': {value!r}",
                    raw,
                )


@dataclass(frozen=True)
class ParsedJudgements:
    """Stage-2 parse result: ordinal-ordered outputs plus non-fatal warnings."""

    outputs: tuple[JudgementOutput, ...]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.outputs)

    def __len__(self) -> int:
        return len(self.outputs)


def parse_stage2_response(text: str, condition: PromptCondition) -> ParsedJudgements:
    """Parse a judgement response in the given condition's style.

    Duplicate segment numbers keep the last occurrence and record a warning. A
    response with no parseable judgement at all is a parse error carrying the raw
    text; labels outside the three-value set raise immediately.
    """
    if not text.strip():
        raise ParseError("empty response", text)
    if condition.style is PromptStyle.REASONING:
        return _parse_reasoning(text)
    return _parse_plain(text)


def _record_output(
    outputs: dict[int, JudgementOutput],
    warnings: list[str],
    output: JudgementOutput,
) -> None:
    if output.segment_index in outputs:
        warnings.append(
            f"segment {output.segment_index + 1} judged more than once; keeping the last"
        )
    outputs[output.segment_index] = output


def _parse_plain(text: str) -> ParsedJudgements:
    outputs: dict[int, JudgementOutput] = {}
    warnings: list[str] = []
    for line in text.splitlines():
        m = _PLAIN_JUDGEMENT.match(line)
        if not m:
            continue
        position = int(m.group(1))
        label = JudgementLabel.parse(m.group(2))
        _record_output(
            outputs, warnings, JudgementOutput(segment_index=position - 1, label=label)
        )
    if not outputs:
        raise ParseError("no parseable judgement lines in response", text)
    ordered = tuple(outputs[k] for k in sorted(outputs))
    return ParsedJudgements(outputs=ordered, warnings=tuple(warnings))


def _parse_reasoning(text: str) -> ParsedJudgements:
    blocks = _split_blocks(text.splitlines(), _SEGMENT_HEADING)
    if not blocks:
        # Some models skip headings and emit bare label lines even when asked to
        # reason; fall back to the plain shape before giving up.
        return _parse_plain(text)

    outputs: dict[int, JudgementOutput] = {}
    warnings: list[str] = []
    for position, body in blocks:
        fields: dict[str, list[str]] = {}
        current: list[str] | None = None
        for line in body:
            m = _TRIPLE_FIELD.match(line)
            if m:
                name = m.group(1).lower()
                if name == "judgment":
                    name = "judgement"
                current = [_clean_value(m.group(2))]
                fields[name] = current
            elif current is not None and line.strip():
                current.append(line.strip())
        if "judgement" not in fields:
            raise StructureError(f"segment {position}: no judgement line found", text)
        # One trailing full stop is tolerated, matching the plain-style regex.
        candidate = _clean_value(" ".join(fields["judgement"]))
        label = JudgementLabel.parse(re.sub(r"[.!]$", "", candidate.strip("[]")))

        def _joined(name: str) -> str | None:
            if name not in fields:
                return None
            value = "\n".join(part for part in fields[name] if part).strip()
            return value or None

        _record_output(
            outputs,
            warnings,
            JudgementOutput(
                segment_index=position - 1,
                label=label,
                observation_text=_joined("observation"),
                reasoning_text=_joined("reasoning"),
            ),
        )
    ordered = tuple(outputs[k] for k in sorted(outputs))
    return ParsedJudgements(outputs=ordered, warnings=tuple(warnings))
