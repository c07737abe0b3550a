"""Canonical response emitters: the parsers' exact inverse.

The deterministic mock backend and the round-trip tests share these, so the mock can
never drift away from what the parsers accept.
"""

from __future__ import annotations

from typing import Sequence

from jalign.errors import InvalidInputError
from jalign.prompts.types import (
    BehaviourRecord,
    JudgementOutput,
    ParticipantDescription,
    PromptStyle,
)


def _participant_lines(role_name: str, desc: ParticipantDescription) -> list[str]:
    lines = [
        f"{role_name}:",
        f"Gaze: {desc.gaze}",
        f"Action: {desc.action}",
        f"Vocalisation: {desc.vocalisation if desc.vocalisation is not None else 'None'}",
    ]
    if desc.engagement is not None:
        lines.append(f"Engagement: {desc.engagement}")
    return lines


def emit_stage1_blocks(pairs: Sequence[tuple[ParticipantDescription, ParticipantDescription]]) -> str:
    """Emit the canonical description response for (parent, child) pairs in order."""
    if not pairs:
        raise InvalidInputError("nothing to emit")
    blocks = []
    for position, (parent, child) in enumerate(pairs, start=1):
        lines = [f"Segment {position}:"]
        lines.extend(_participant_lines("Parent", parent))
        lines.extend(_participant_lines("Child", child))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def emit_stage1_response(records: Sequence[BehaviourRecord]) -> str:
    """Emit the canonical description response for records in prompt order."""
    return emit_stage1_blocks([(r.parent, r.child) for r in records])


def emit_stage2_response(outputs: Sequence[JudgementOutput], style: PromptStyle) -> str:
    """Emit the canonical judgement response in the given prompt style."""
    if not outputs:
        raise InvalidInputError("nothing to emit")
    if style is PromptStyle.NON_REASONING:
        lines = [f"Segment {o.segment_index + 1}: {o.label.value}" for o in outputs]
        return "\n".join(lines) + "\n"
    blocks = []
    for o in outputs:
        if o.observation_text is None or o.reasoning_text is None:
            raise InvalidInputError(
                "reasoning-style emission needs observation and reasoning text"
            )
        blocks.append(
            f"Segment {o.segment_index + 1}:\n"
            f"Observation: {o.observation_text}\n"
            f"Reasoning: {o.reasoning_text}\n"
            f"Judgement: {o.label.value}"
        )
    return "\n\n".join(blocks) + "\n"
