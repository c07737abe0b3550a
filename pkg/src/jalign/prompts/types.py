"""Value types for prompt rendering, parsing and exemplar retrieval."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

from jalign.core.labels import AgeBand, Category, JudgementLabel, Role
from jalign.core.types import SegmentRef
from jalign.errors import InvalidInputError


class PromptStage(str, Enum):
    DESCRIBE = "describe"
    JUDGE = "judge"


class Shots(str, Enum):
    ZERO = "zero"
    FEW = "few"


class PromptStyle(str, Enum):
    REASONING = "reasoning"
    NON_REASONING = "non_reasoning"


_STYLE_SLUGS = {PromptStyle.REASONING: "reasoning", PromptStyle.NON_REASONING: "plain"}
_STYLE_ALIASES = {
    "reasoning": PromptStyle.REASONING,
    "plain": PromptStyle.NON_REASONING,
    "non_reasoning": PromptStyle.NON_REASONING,
    "non-reasoning": PromptStyle.NON_REASONING,
}


@dataclass(frozen=True)
class PromptCondition:
    """One cell of the shots x style grid."""

    shots: Shots
    style: PromptStyle

    @property
    def slug(self) -> str:
        return f"{self.shots.value}_{_STYLE_SLUGS[self.style]}"

    @classmethod
    def parse(cls, text: str) -> "PromptCondition":
        parts = re.split(r"[_\-.]", text.strip().lower(), maxsplit=1)
        if len(parts) == 2:
            shots_text, style_text = parts
            if shots_text in ("zero", "few") and style_text in _STYLE_ALIASES:
                return cls(shots=Shots(shots_text), style=_STYLE_ALIASES[style_text])
        raise InvalidInputError(f"unknown prompt condition: {text!r}")


ALL_CONDITIONS: tuple[PromptCondition, ...] = (
    PromptCondition(Shots.ZERO, PromptStyle.NON_REASONING),
    PromptCondition(Shots.ZERO, PromptStyle.REASONING),
    PromptCondition(Shots.FEW, PromptStyle.NON_REASONING),
    PromptCondition(Shots.FEW, PromptStyle.REASONING),
)


def _check_subject_sentence(sentence: str, role: Role, field: str) -> None:
    prefix = f"the {role.value}"
    if not sentence.lower().startswith(prefix):
        raise InvalidInputError(
            f"{role.value} {field} must be a sentence about 'The {role.value} ...', "
            f"got {sentence!r}"
        )


@dataclass(frozen=True)
class ParticipantDescription:
    """One participant's cue sentences for one segment.

    gaze and action are declarative sentences whose subject is the participant;
    vocalisation is None when the participant made no sound. engagement is only
    populated when the optional fourth cue is switched on.
    """

    gaze: str
    action: str
    vocalisation: str | None
    engagement: str | None = None

    def __post_init__(self):
        if not self.gaze.strip():
            raise InvalidInputError("gaze sentence must be non-empty")
        if not self.action.strip():
            raise InvalidInputError("action sentence must be non-empty")
        if self.vocalisation is not None and not self.vocalisation.strip():
            raise InvalidInputError("vocalisation must be None or a non-empty sentence")
        if self.engagement is not None and not self.engagement.strip():
            raise InvalidInputError("engagement must be None or a non-empty sentence")


@dataclass(frozen=True)
class BehaviourRecord:
    """Structured description of one segment: both participants, all cue channels."""

    segment: SegmentRef
    parent: ParticipantDescription
    child: ParticipantDescription

    def __post_init__(self):
        _check_subject_sentence(self.parent.gaze, Role.PARENT, "gaze")
        _check_subject_sentence(self.parent.action, Role.PARENT, "action")
        _check_subject_sentence(self.child.gaze, Role.CHILD, "gaze")
        _check_subject_sentence(self.child.action, Role.CHILD, "action")

    def for_role(self, role: Role) -> ParticipantDescription:
        return self.parent if role is Role.PARENT else self.child


@dataclass(frozen=True)
class Exemplar:
    """A reference segment used for few-shot prompting.

    observation holds the bracket-style Gaze/Action/Vocalisation block; reasoning is
    optional and required only by the reasoning prompt style. Only exemplars from
    unanimously labelled segments are eligible for retrieval.
    """

    exemplar_id: str
    observation: str
    judgement: JudgementLabel
    reasoning: str | None = None
    unanimous: bool = False
    source_segment: SegmentRef | None = None
    age_band: AgeBand | None = None
    category: Category | None = None
    extra: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.exemplar_id:
            raise InvalidInputError("exemplar_id must be non-empty")
        if not self.observation.strip():
            raise InvalidInputError("exemplar observation must be non-empty")
        if self.reasoning is not None and not self.reasoning.strip():
            raise InvalidInputError("exemplar reasoning must be None or non-empty")


@dataclass(frozen=True)
class RenderedPrompt:
    """A fully rendered prompt plus the segment ids it covers, in prompt order."""

    stage: PromptStage
    text: str
    segment_ids: tuple[str, ...]
    condition: PromptCondition | None = None

    def __post_init__(self):
        if not self.text:
            raise InvalidInputError("prompt text must be non-empty")
        if not self.segment_ids:
            raise InvalidInputError("a prompt must cover at least one segment")


@dataclass(frozen=True)
class JudgementOutput:
    """One parsed model judgement; segment_index is the 0-based prompt ordinal."""

    segment_index: int
    label: JudgementLabel
    observation_text: str | None = None
    reasoning_text: str | None = None

    def __post_init__(self):
        if self.segment_index < 0:
            raise InvalidInputError("segment_index must be >= 0")
