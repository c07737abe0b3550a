"""Prompt rendering: byte-frozen goldens plus the wording that must never drift."""

from pathlib import Path

import pytest

from golden_inputs import GOLDEN_SEGMENTS, single_record, two_records
from jalign.core.labels import Role
from jalign.core.segmentation import segment_video
from jalign.errors import ConfigurationError, InvalidInputError
from jalign.prompts.exemplars import builtin_exemplars, select_exemplars
from jalign.prompts.render import (
    RenderOptions,
    bracket_clause,
    format_timestamp,
    render_stage1_prompt,
    render_stage2_prompt,
    segment_marker,
)
from jalign.prompts.types import PromptCondition, PromptStyle

GOLDENS = Path(__file__).parent / "goldens"


def golden(name: str) -> str:
    return (GOLDENS / name).read_text(encoding="utf-8")


def test_stage1_golden_bytes():
    prompt = render_stage1_prompt(GOLDEN_SEGMENTS)
    assert prompt.text == golden("stage1_three_segments.txt")
    assert prompt.segment_ids == ("demo:0", "demo:1", "demo:2")


def test_stage2_zero_plain_golden_bytes():
    prompt = render_stage2_prompt(single_record(), PromptCondition.parse("zero_plain"))
    assert prompt.text == golden("stage2_zero_plain_single.txt")


def test_stage2_zero_reasoning_golden_bytes():
    prompt = render_stage2_prompt(two_records(), PromptCondition.parse("zero_reasoning"))
    assert prompt.text == golden("stage2_zero_reasoning_two.txt")


def test_stage2_few_plain_golden_bytes():
    exemplars = select_exemplars(builtin_exemplars(), style=PromptStyle.NON_REASONING)
    prompt = render_stage2_prompt(
        single_record(), PromptCondition.parse("few_plain"), exemplars=exemplars
    )
    assert prompt.text == golden("stage2_few_plain_single.txt")


def test_stage2_few_reasoning_golden_bytes():
    exemplars = select_exemplars(builtin_exemplars())
    prompt = render_stage2_prompt(
        single_record(), PromptCondition.parse("few_reasoning"), exemplars=exemplars
    )
    assert prompt.text == golden("stage2_few_reasoning_single.txt")


# --- wording that the templates must carry verbatim ---------------------------


def test_stage1_instruction_sentences():
    text = render_stage1_prompt(GOLDEN_SEGMENTS).text
    assert "You are watching a video of a parent interacting with a child." in text
    assert (
        "using a natural language sentence with a subject–verb–object structure"
        in text
    )
    assert "The child looked at the parent’s face." in text
    assert "Write 'None' if there were no vocalisations." in text


def test_stage2_shared_system_sentence():
    for slug in ("zero_plain", "zero_reasoning"):
        text = render_stage2_prompt(single_record(), PromptCondition.parse(slug)).text
        assert text.startswith("You are a speech-language pathologist.")
        assert (
            "share attention with another person—typically the parent—by "
            "coordinating behaviours" in text
        )


def test_stage2_plain_asks_for_bare_labels():
    text = render_stage2_prompt(single_record(), PromptCondition.parse("zero_plain")).text
    assert (
        "Please evaluate the quality of the child's joint attention in each segment "
        "below based on their behaviours." in text
    )
    assert text.rstrip("\n").endswith("Segment 1: [Strong/Moderate/Poor]")


def test_stage2_reasoning_numbered_steps():
    text = render_stage2_prompt(single_record(), PromptCondition.parse("zero_reasoning")).text
    assert "For each segment below, do the following:" in text
    assert (
        "1. Observation: Briefly describe what the parent and child did, said, "
        "and looked at." in text
    )
    assert (
        "2. Reasoning: Assess whether the child was showing clear, partial, or "
        "minimal joint attention, and explain why." in text
    )
    assert "3. Judgement: Assign a final label — Strong / Moderate / Poor." in text


def test_few_shot_prompt_structure():
    exemplars = select_exemplars(builtin_exemplars())
    text = render_stage2_prompt(
        single_record(), PromptCondition.parse("few_reasoning"), exemplars=exemplars
    ).text
    assert "Examples:" in text
    assert "Now evaluate the following segments:" in text
    assert text.index("Examples:") < text.index("Now evaluate the following segments:")
    # exemplar order is Strong, Moderate, Poor
    s = text.index("Judgement: Strong")
    m = text.index("Judgement: Moderate")
    p = text.index("Judgement: Poor")
    assert s < m < p


def test_zero_shot_has_no_examples_section():
    text = render_stage2_prompt(single_record(), PromptCondition.parse("zero_plain")).text
    assert "Examples:" not in text
    assert "Now evaluate the following segments:" not in text


def test_format_lines_cover_every_segment():
    text = render_stage2_prompt(two_records(), PromptCondition.parse("zero_plain")).text
    assert "Segment 1: [Strong/Moderate/Poor]" in text
    assert "Segment 2: [Strong/Moderate/Poor]" in text


# --- helpers --------------------------------------------------------------------


def test_format_timestamp():
    assert format_timestamp(0.0) == "00:00"
    assert format_timestamp(5.0) == "00:05"
    assert format_timestamp(12.3) == "00:12.3"
    assert format_timestamp(65.0) == "01:05"
    assert format_timestamp(125.5) == "02:05.5"
    assert format_timestamp(3605.0) == "60:05"


def test_segment_marker_uses_en_dash_range():
    seg = segment_video(12.3, video_id="v")[2]
    assert segment_marker(3, seg) == "Segment 3 (00:10–00:12.3):"


def test_bracket_clause_strips_subject_and_recapitalises():
    assert bracket_clause("The parent pointed at the ball.", Role.PARENT) == "Pointed at the ball."
    assert bracket_clause("The child looked away.", Role.CHILD) == "Looked away."
    assert bracket_clause(None, Role.CHILD) == "None"
    # sentences that do not open with the subject pass through unchanged
    assert bracket_clause("Reached for the cup.", Role.CHILD) == "Reached for the cup."


def test_render_rejects_empty_segment_list():
    with pytest.raises(InvalidInputError):
        render_stage1_prompt([])
    with pytest.raises(InvalidInputError):
        render_stage2_prompt([], PromptCondition.parse("zero_plain"))


def test_few_shot_requires_exemplars_and_zero_rejects_them():
    exemplars = select_exemplars(builtin_exemplars())
    with pytest.raises(InvalidInputError):
        render_stage2_prompt(single_record(), PromptCondition.parse("few_reasoning"))
    with pytest.raises(InvalidInputError):
        render_stage2_prompt(
            single_record(), PromptCondition.parse("zero_plain"), exemplars=exemplars
        )


def test_missing_template_version_is_a_configuration_error():
    with pytest.raises(ConfigurationError):
        render_stage1_prompt(GOLDEN_SEGMENTS, options=RenderOptions(template_version="v999"))


def test_engagement_section_is_opt_in():
    off = render_stage1_prompt(GOLDEN_SEGMENTS).text
    on = render_stage1_prompt(
        GOLDEN_SEGMENTS, options=RenderOptions(engagement_enabled=True)
    ).text
    assert "4. Engagement" not in off
    assert "4. Engagement" in on
