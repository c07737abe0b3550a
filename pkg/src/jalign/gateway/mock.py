"""Deterministic mock backend.

Descriptions are synthesized from a hash of the segment id over fixed sentence
pools; judgements follow a fixed cue ruleset. Identical requests always produce
identical bytes, which is what makes offline pipeline runs reproducible.
"""

from __future__ import annotations

import hashlib
import re

from jalign.core.labels import JudgementLabel
from jalign.errors import InvalidInputError
from jalign.gateway.requests import ModelRequest, ModelResponse
from jalign.prompts.emit import emit_stage1_blocks, emit_stage2_response
from jalign.prompts.types import (
    BehaviourRecord,
    JudgementOutput,
    ParticipantDescription,
    PromptStage,
    PromptStyle,
)

PARENT_GAZE_POOL = (
    "The parent looked at the child.",
    "The parent watched the child's hands.",
    "The parent looked at the toy pieces.",
    "The parent shifted gaze between the child and the blocks.",
)

PARENT_ACTION_POOL = (
    "The parent pointed at the red ball.",
    "The parent picked up a track piece.",
    "The parent sat facing the child.",
    "The parent held out a puzzle piece.",
)

PARENT_VOCALISATION_POOL = (
    None,
    "The parent instructed the child to listen.",
    "The parent made an encouraging comment.",
    "The parent named the colours of the blocks.",
)

# First three reference the parent; the rest do not.
CHILD_GAZE_POOL = (
    "The child looked at the parent's face.",
    "The child shifted gaze between the parent and the toy.",
    "The child glanced up at the parent.",
    "The child stared at the blocks.",
    "The child looked at the toys.",
    "The child focused on the train tracks.",
    "The child looked down at the table.",
    "The child watched the picture book.",
)

CHILD_ACTION_POOL = (
    "The child reached towards the puzzle pieces.",
    "The child held a toy and remained seated.",
    "The child connected the track pieces.",
    "The child clapped their hands.",
)

CHILD_VOCALISATION_POOL = (
    None,
    "The child said they wanted to build.",
    "The child babbled excitedly.",
    "The child echoed the parent's words.",
)

_REASONING_BY_LABEL = {
    JudgementLabel.STRONG: (
        "The child coordinated gaze and vocalisation with the parent, sharing "
        "attention on the activity."
    ),
    JudgementLabel.MODERATE: (
        "The child stayed engaged with the task, but social referencing toward the "
        "parent was only partial."
    ),
    JudgementLabel.POOR: (
        "The child gave no clear response to the parent's bid for attention during "
        "the segment."
    ),
}


def judge_cues(
    child_gaze: str,
    child_vocalisation: str | None,
    parent_vocalisation: str | None,
) -> JudgementLabel:
    """Fixed judgement ruleset over the three decisive cues."""
    gaze_refs_parent = "parent" in child_gaze.lower()
    if gaze_refs_parent and child_vocalisation is not None:
        return JudgementLabel.STRONG
    if not gaze_refs_parent and child_vocalisation is None and parent_vocalisation is not None:
        return JudgementLabel.POOR
    return JudgementLabel.MODERATE


def mock_judge(records: list[BehaviourRecord]) -> list[JudgementOutput]:
    """Apply the ruleset to described segments, in prompt order."""
    outputs = []
    for ordinal, record in enumerate(records):
        label = judge_cues(
            record.child.gaze, record.child.vocalisation, record.parent.vocalisation
        )
        outputs.append(JudgementOutput(segment_index=ordinal, label=label))
    return outputs


def synthesize_description(segment_id: str) -> tuple[ParticipantDescription, ParticipantDescription]:
    """Deterministic (parent, child) description pair for one segment id."""
    digest = hashlib.sha256(segment_id.encode("utf-8")).digest()
    parent = ParticipantDescription(
        gaze=PARENT_GAZE_POOL[digest[0] % len(PARENT_GAZE_POOL)],
        action=PARENT_ACTION_POOL[digest[1] % len(PARENT_ACTION_POOL)],
        vocalisation=PARENT_VOCALISATION_POOL[digest[2] % len(PARENT_VOCALISATION_POOL)],
    )
    child = ParticipantDescription(
        gaze=CHILD_GAZE_POOL[digest[3] % len(CHILD_GAZE_POOL)],
        action=CHILD_ACTION_POOL[digest[4] % len(CHILD_ACTION_POOL)],
        vocalisation=CHILD_VOCALISATION_POOL[digest[5] % len(CHILD_VOCALISATION_POOL)],
    )
    return parent, child


_BLOCK_HEADING = re.compile(r"^segment\s+(\d+)\s*:\s*$", re.IGNORECASE)
_EVALUATE_MARKER = "Now evaluate the following segments:"
_CUE_PREFIXES = ("Gaze:", "Action:", "Vocalisation:")


def _split_bracket_line(line: str) -> tuple[str | None, str | None]:
    """'Gaze: [Parent] X [Child] Y' -> (X, Y); 'None' maps to None."""
    _, _, rest = line.partition(":")
    if "[Child]" not in rest:
        return None, None
    parent_part, child_part = rest.split("[Child]", 1)
    parent_text = parent_part.replace("[Parent]", "", 1).strip()
    child_text = child_part.strip()
    return (
        None if parent_text == "None" else parent_text,
        None if child_text == "None" else child_text,
    )


def _extract_cue_blocks(prompt_text: str) -> list[dict[str, tuple[str | None, str | None]]]:
    """Pull per-segment cue clauses out of a rendered judgement prompt."""
    body = prompt_text.split(_EVALUATE_MARKER, 1)[-1]
    blocks: list[dict] = []
    current: dict | None = None
    for line in body.splitlines():
        stripped = line.strip()
        if _BLOCK_HEADING.match(stripped):
            current = {}
            blocks.append(current)
            continue
        if current is None:
            continue
        if stripped.startswith("Judgement:"):
            current["_exemplar"] = True
            continue
        for prefix in _CUE_PREFIXES:
            if stripped.startswith(prefix):
                current[prefix[:-1].lower()] = _split_bracket_line(stripped)
    return [b for b in blocks if not b.get("_exemplar")]


class MockBackend:
    """Offline stand-in for a multimodal model; see module docstring."""

    backend_id = "mock"

    def invoke(self, request: ModelRequest) -> ModelResponse:
        if request.stage is PromptStage.DESCRIBE:
            raw = self._describe(request)
        else:
            raw = self._judge(request)
        return ModelResponse(raw_text=raw, backend_id=self.backend_id)

    def _describe(self, request: ModelRequest) -> str:
        pairs = [synthesize_description(sid) for sid in request.prompt.segment_ids]
        return emit_stage1_blocks(pairs)

    def _judge(self, request: ModelRequest) -> str:
        condition = request.prompt.condition
        if condition is None:
            raise InvalidInputError("judge prompts must carry their condition")
        blocks = _extract_cue_blocks(request.prompt.text)
        if len(blocks) != len(request.prompt.segment_ids):
            raise InvalidInputError(
                f"prompt covers {len(request.prompt.segment_ids)} segments but "
                f"{len(blocks)} cue blocks were found"
            )
        outputs = []
        for ordinal, block in enumerate(blocks):
            child_gaze = block.get("gaze", (None, None))[1] or ""
            parent_voc, child_voc = block.get("vocalisation", (None, None))
            label = judge_cues(child_gaze, child_voc, parent_voc)
            if condition.style is PromptStyle.REASONING:
                observation = _observation_line(block)
                outputs.append(
                    JudgementOutput(
                        segment_index=ordinal,
                        label=label,
                        observation_text=observation,
                        reasoning_text=_REASONING_BY_LABEL[label],
                    )
                )
            else:
                outputs.append(JudgementOutput(segment_index=ordinal, label=label))
        return emit_stage2_response(outputs, condition.style)


def _observation_line(block: dict) -> str:
    parts = []
    for name in ("gaze", "action", "vocalisation"):
        pair = block.get(name)
        if pair is None:
            continue
        parent_text, child_text = pair
        parts.append(
            f"{name.capitalize()}: [Parent] {parent_text or 'None'} "
            f"[Child] {child_text or 'None'}"
        )
    return " ".join(parts)
