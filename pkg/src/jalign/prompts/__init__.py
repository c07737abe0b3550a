"""Prompt engine: templated rendering, lenient parsing, exemplar retrieval."""

from jalign.prompts.emit import emit_stage1_response, emit_stage2_response
from jalign.prompts.exemplars import builtin_exemplars, select_exemplars
from jalign.prompts.parse import ParsedJudgements, parse_stage1_response, parse_stage2_response
from jalign.prompts.render import (
    DEFAULT_TEMPLATE_VERSION,
    RenderOptions,
    format_timestamp,
    load_template,
    render_stage1_prompt,
    render_stage2_prompt,
    segment_marker,
)
from jalign.prompts.types import (
    ALL_CONDITIONS,
    BehaviourRecord,
    Exemplar,
    JudgementOutput,
    ParticipantDescription,
    PromptCondition,
    PromptStage,
    PromptStyle,
    RenderedPrompt,
    Shots,
)

__all__ = [
    "ALL_CONDITIONS",
    "BehaviourRecord",
    "DEFAULT_TEMPLATE_VERSION",
    "Exemplar",
    "JudgementOutput",
    "ParsedJudgements",
    "ParticipantDescription",
    "PromptCondition",
    "PromptStage",
    "PromptStyle",
    "RenderOptions",
    "RenderedPrompt",
    "Shots",
    "builtin_exemplars",
    "emit_stage1_response",
    "emit_stage2_response",
    "format_timestamp",
    "load_template",
    "parse_stage1_response",
    "parse_stage2_response",
    "render_stage1_prompt",
    "render_stage2_prompt",
    "segment_marker",
    "select_exemplars",
]
