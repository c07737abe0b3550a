"""Deterministic prompt rendering from versioned template assets."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from jalign.core.labels import Role
from jalign.core.types import SegmentRef
from jalign.errors import ConfigurationError, InvalidInputError
from jalign.prompts.types import (
    BehaviourRecord,
    Exemplar,
    PromptCondition,
    PromptStage,
    PromptStyle,
    RenderedPrompt,
    Shots,
)

DEFAULT_TEMPLATE_VERSION = "v1"

_ENGAGEMENT_SECTION = (
    "\n4. Engagement: Describe how engaged the person appeared overall, using a short "
    "natural language sentence with a subject–verb–object structure.\n"
    "   Write 'None' if engagement could not be judged."
)

_EXAMPLES_HEADER = "Examples:"
_EVALUATE_MARKER = "Now evaluate the following segments:"


@dataclass(frozen=True)
class RenderOptions:
    """Knobs that vary per project: template version/location and the fourth cue."""

    template_version: str = DEFAULT_TEMPLATE_VERSION
    template_dir: Path | None = None
    engagement_enabled: bool = False


DEFAULT_OPTIONS = RenderOptions()


def load_template(name: str, options: RenderOptions = DEFAULT_OPTIONS) -> str:
    """Read one template asset; a missing file is a configuration error."""
    if options.template_dir is not None:
        path = Path(options.template_dir) / options.template_version / f"{name}.txt"
        if not path.is_file():
            raise ConfigurationError(f"prompt template not found: {path}")
        return path.read_text(encoding="utf-8")
    ref = (
        resources.files("jalign.prompts")
        / "templates"
        / options.template_version
        / f"{name}.txt"
    )
    try:
        return ref.read_text(encoding="utf-8")
    except (FileNotFoundError, NotADirectoryError):
        raise ConfigurationError(
            f"prompt template not found: {options.template_version}/{name}.txt"
        ) from None


def format_timestamp(seconds: float) -> str:
    """mm:ss, with one decimal on the seconds only when the value is fractional."""
    if seconds < 0:
        raise InvalidInputError(f"timestamp must be >= 0, got {seconds}")
    minutes = int(seconds // 60)
    rest = seconds - minutes * 60
    if rest == int(rest):
        return f"{minutes:02d}:{int(rest):02d}"
    return f"{minutes:02d}:{rest:04.1f}"


def segment_marker(position: int, segment: SegmentRef) -> str:
    """Marker line naming one segment by 1-based prompt position and time range."""
    start = format_timestamp(segment.start_s)
    end = format_timestamp(segment.end_s)
    return f"Segment {position} ({start}–{end}):"


def render_stage1_prompt(
    segments: Sequence[SegmentRef],
    options: RenderOptions = DEFAULT_OPTIONS,
) -> RenderedPrompt:
    """Render the behaviour-description prompt with one marker per segment."""
    if not segments:
        raise InvalidInputError("cannot render a prompt for zero segments")
    template = load_template("stage1_describe", options)
    markers = "\n".join(segment_marker(i + 1, seg) for i, seg in enumerate(segments))
    engagement = _ENGAGEMENT_SECTION if options.engagement_enabled else ""
    text = template.format(engagement_section=engagement, segment_markers=markers)
    text = text.rstrip("\n") + "\n"
    return RenderedPrompt(
        stage=PromptStage.DESCRIBE,
        text=text,
        segment_ids=tuple(seg.segment_id for seg in segments),
    )


def bracket_clause(sentence: str | None, role: Role) -> str:
    """Convert a declarative cue sentence into the bracketed exemplar style.

    'The parent pointed at the ball.' becomes 'Pointed at the ball.'; sentences that
    do not open with the subject are kept as written. None renders as 'None'.
    """
    if sentence is None:
        return "None"
    prefix = f"the {role.value} "
    if sentence.lower().startswith(prefix):
        rest = sentence[len(prefix):].strip()
        if rest:
            return rest[0].upper() + rest[1:]
    return sentence


def _cue_line(field_name: str, parent_text: str, child_text: str) -> str:
    return f"{field_name}: [Parent] {parent_text} [Child] {child_text}"


def behaviour_observation_block(record: BehaviourRecord) -> str:
    """The Gaze/Action/Vocalisation bracket block for one segment."""
    parent, child = record.parent, record.child
    lines = [
        _cue_line("Gaze", bracket_clause(parent.gaze, Role.PARENT), bracket_clause(child.gaze, Role.CHILD)),
        _cue_line("Action", bracket_clause(parent.action, Role.PARENT), bracket_clause(child.action, Role.CHILD)),
        _cue_line(
            "Vocalisation",
            bracket_clause(parent.vocalisation, Role.PARENT),
            bracket_clause(child.vocalisation, Role.CHILD),
        ),
    ]
    if parent.engagement is not None or child.engagement is not None:
        lines.append(
            _cue_line(
                "Engagement",
                bracket_clause(parent.engagement, Role.PARENT),
                bracket_clause(child.engagement, Role.CHILD),
            )
        )
    return "\n".join(lines)


def _segment_block(position: int, record: BehaviourRecord) -> str:
    return f"Segment {position}:\nObservation:\n{behaviour_observation_block(record)}"


def _exemplar_block(position: int, exemplar: Exemplar, include_reasoning: bool) -> str:
    lines = [f"Segment {position}:", "Observation:", exemplar.observation.strip()]
    if include_reasoning:
        if exemplar.reasoning is None:
            raise InvalidInputError(
                f"exemplar {exemplar.exemplar_id!r} has no reasoning text"
            )
        lines.append(f"Reasoning: {exemplar.reasoning}")
    lines.append(f"Judgement: {exemplar.judgement.value}")
    return "\n".join(lines)


def render_stage2_prompt(
    records: Sequence[BehaviourRecord],
    condition: PromptCondition,
    exemplars: Sequence[Exemplar] | None = None,
    options: RenderOptions = DEFAULT_OPTIONS,
) -> RenderedPrompt:
    """Render the judgement prompt for one batch of described segments.

    Few-shot conditions require exactly the retrieved exemplars; zero-shot conditions
    must not receive any. The non_reasoning style asks for bare labels, the reasoning
    style for Observation/Reasoning/Judgement triples.
    """
    if not records:
        raise InvalidInputError("cannot render a prompt for zero segments")
    if condition.shots is Shots.FEW and not exemplars:
        raise InvalidInputError("few-shot rendering requires exemplars")
    if condition.shots is Shots.ZERO and exemplars:
        raise InvalidInputError("zero-shot rendering does not accept exemplars")

    template_name = (
        "stage2_reasoning" if condition.style is PromptStyle.REASONING else "stage2_plain"
    )
    template = load_template(template_name, options)

    if exemplars:
        include_reasoning = condition.style is PromptStyle.REASONING
        blocks = "\n\n".join(
            _exemplar_block(i + 1, ex, include_reasoning) for i, ex in enumerate(exemplars)
        )
        examples_section = f"{_EXAMPLES_HEADER}\n\n{blocks}\n\n{_EVALUATE_MARKER}\n\n"
    else:
        examples_section = ""

    segments_block = "\n\n".join(_segment_block(i + 1, rec) for i, rec in enumerate(records))
    fields = {"examples_section": examples_section, "segments": segments_block}
    if condition.style is PromptStyle.NON_REASONING:
        fields["format_lines"] = "\n".join(
            f"Segment {i + 1}: [Strong/Moderate/Poor]" for i in range(len(records))
        )
    text = template.format(**fields).rstrip("\n") + "\n"
    return RenderedPrompt(
        stage=PromptStage.JUDGE,
        text=text,
        segment_ids=tuple(rec.segment.segment_id for rec in records),
        condition=condition,
    )
