"""Emit→parse round-trips over randomly generated content.

The canonical emitters and the lenient parsers must be exact inverses for
well-formed content; the deterministic mock backend depends on that.
"""

import random

from jalign.core.labels import JudgementLabel
from jalign.core.segmentation import segment_video
from jalign.prompts import (
    PromptCondition,
    emit_stage1_response,
    emit_stage2_response,
    parse_stage1_response,
    parse_stage2_response,
)
from jalign.prompts.types import (
    BehaviourRecord,
    JudgementOutput,
    ParticipantDescription,
    PromptStyle,
    Shots,
)

PLAIN = PromptCondition(Shots.ZERO, PromptStyle.NON_REASONING)
REASONING = PromptCondition(Shots.FEW, PromptStyle.REASONING)

_TARGETS = [
    "the child's face", "the red ball", "the picture book", "the block tower",
    "the floor", "the toy shelf", "the puzzle pieces", "the camera",
]
_PARENT_ACTS = [
    "pointed at the ball", "handed the book to the child", "stacked two blocks",
    "tapped the table", "held up a crayon", "clapped twice",
    "rolled the car towards the child",
]
_CHILD_ACTS = [
    "reached for the ball", "turned a page", "knocked the tower over",
    "banged the spoon", "scribbled on the paper", "crawled away",
    "pushed the car back",
]
_UTTERANCES = [
    "Look at this!", "Can you find the dog?", "Well done!", "Your turn.",
    "What colour is it?", "Ball!", "More?", "Uh oh.",
]
_OBSERVATIONS = [
    "Both partners looked at the same toy.",
    "The child glanced at the parent and then away.",
    "The parent pointed but the child did not follow.",
    "Sustained mutual play with the blocks.",
    "The child played alone while the parent watched.",
]
_REASONS = [
    "Gaze following and a shared referent were sustained.",
    "Attention was shared only briefly.",
    "No coordinated attention was visible.",
    "The bid was initiated and acknowledged.",
    "Engagement was one-sided throughout.",
]


def random_description(rng, role):
    acts = _PARENT_ACTS if role == "parent" else _CHILD_ACTS
    voc = None
    if rng.random() < 0.6:
        voc = f"The {role} said, '{rng.choice(_UTTERANCES)}'"
    engagement = None
    if rng.random() < 0.2:
        engagement = f"The {role} stayed focused on the activity."
    return ParticipantDescription(
        gaze=f"The {role} looked at {rng.choice(_TARGETS)}.",
        action=f"The {role} {rng.choice(acts)}.",
        vocalisation=voc,
        engagement=engagement,
    )


def random_records(rng, tag):
    n = rng.randint(1, 6)
    segments = segment_video(5.0 * n, video_id=f"rt-{tag}")
    return [
        BehaviourRecord(
            segment=seg,
            parent=random_description(rng, "parent"),
            child=random_description(rng, "child"),
        )
        for seg in segments
    ], segments


def random_outputs(rng, style):
    n = rng.randint(1, 8)
    outputs = []
    for index in range(n):
        label = rng.choice(list(JudgementLabel))
        if style is PromptStyle.REASONING:
            outputs.append(
                JudgementOutput(
                    segment_index=index,
                    label=label,
                    observation_text=rng.choice(_OBSERVATIONS),
                    reasoning_text=rng.choice(_REASONS),
                )
            )
        else:
            outputs.append(JudgementOutput(segment_index=index, label=label))
    return outputs


def run_roundtrip_batch(seed, n_stage1, n_plain, n_reasoning):
    """Run the full batch, returning how many round-trips were exercised."""
    rng = random.Random(seed)
    done = 0
    for i in range(n_stage1):
        records, segments = random_records(rng, f"{seed}-{i}")
        assert parse_stage1_response(emit_stage1_response(records), segments) == records
        done += 1
    for _ in range(n_plain):
        outputs = random_outputs(rng, PromptStyle.NON_REASONING)
        text = emit_stage2_response(outputs, PromptStyle.NON_REASONING)
        assert list(parse_stage2_response(text, PLAIN)) == outputs
        done += 1
    for _ in range(n_reasoning):
        outputs = random_outputs(rng, PromptStyle.REASONING)
        text = emit_stage2_response(outputs, PromptStyle.REASONING)
        assert list(parse_stage2_response(text, REASONING)) == outputs
        done += 1
    return done


def test_thousand_random_roundtrips():
    assert run_roundtrip_batch(20260817, 400, 300, 300) == 1000


def test_roundtrip_preserves_none_vocalisation():
    rng = random.Random(3)
    for _ in range(50):
        records, segments = random_records(rng, "none-voc")
        parsed = parse_stage1_response(emit_stage1_response(records), segments)
        for want, got in zip(records, parsed):
            assert got.parent.vocalisation == want.parent.vocalisation
            assert got.child.vocalisation == want.child.vocalisation


def test_roundtrip_reasoning_text_survives():
    rng = random.Random(4)
    outputs = random_outputs(rng, PromptStyle.REASONING)
    text = emit_stage2_response(outputs, PromptStyle.REASONING)
    parsed = parse_stage2_response(text, REASONING)
    for want, got in zip(outputs, parsed):
        assert got.observation_text == want.observation_text
        assert got.reasoning_text == want.reasoning_text
