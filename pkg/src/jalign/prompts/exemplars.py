"""Exemplar library: eligibility, context ranking and the built-in seed set."""

from __future__ import annotations

import dataclasses
from typing import Sequence

from jalign.core.labels import LABEL_ORDER, AgeBand, Category, JudgementLabel
from jalign.errors import ExemplarGapError
from jalign.prompts.types import Exemplar, PromptStyle

_STRONG_OBSERVATION = """\
Gaze: [Parent] Looked at the toy shelf and occasionally at the child. [Child] Looked at the toys.
Action: [Parent] Pointed toward the toy shelf. [Child] Held a toy and remained seated.
Vocalisation: [Parent] Instructed the child to listen. [Child] Said they wanted to build."""

_MODERATE_OBSERVATION = """\
Gaze: [Parent] Looked at the toy pieces. [Child] Focused on the train tracks throughout the segment.
Action: [Parent] Picked up a track piece. [Child] Connected the track pieces without hesitation.
Vocalisation: [Parent] Did not speak. [Child] Remained silent."""

_POOR_OBSERVATION = """\
Gaze: [Parent] Looked at the child’s face. [Child] Looked only at the toys.
Action: [Parent] Sat facing the child and remained still. [Child] Manipulated the toy without shifting posture.
Vocalisation: [Parent] Made an encouraging comment. [Child] Did not respond verbally."""


def builtin_exemplars() -> list[Exemplar]:
    """The three seed exemplars, one per label, each unanimously agreed."""
    return [
        Exemplar(
            exemplar_id="seed-strong",
            observation=_STRONG_OBSERVATION,
            judgement=JudgementLabel.STRONG,
            reasoning=(
                "The child showed clear engagement with the task and responded "
                "meaningfully, although gaze was primarily on the object."
            ),
            unanimous=True,
        ),
        Exemplar(
            exemplar_id="seed-moderate",
            observation=_MODERATE_OBSERVATION,
            judgement=JudgementLabel.MODERATE,
            reasoning=(
                "Although no verbal exchange occurred, both parties were jointly "
                "focused on the same task. Engagement was sustained."
            ),
            unanimous=True,
        ),
        Exemplar(
            exemplar_id="seed-poor",
            observation=_POOR_OBSERVATION,
            judgement=JudgementLabel.POOR,
            reasoning=(
                "The child remained engaged with the activity but showed minimal "
                "social referencing or gaze toward the parent."
            ),
            unanimous=True,
        ),
    ]


def select_exemplars(
    library: Sequence[Exemplar],
    *,
    style: PromptStyle = PromptStyle.REASONING,
    age_band: AgeBand | None = None,
    category: Category | None = None,
) -> tuple[Exemplar, Exemplar, Exemplar]:
    """Pick one exemplar per label in Strong/Moderate/Poor order.

    Eligible exemplars come from unanimously labelled segments, and the reasoning
    style additionally requires reasoning text. Ranking prefers an age-band match,
    then a category match, then earliest insertion. For the non_reasoning style the
    reasoning text is stripped from the returned copies.
    """
    chosen = []
    for label in LABEL_ORDER:
        candidates = [
            (pos, ex)
            for pos, ex in enumerate(library)
            if ex.judgement is label
            and ex.unanimous
            and (style is not PromptStyle.REASONING or ex.reasoning is not None)
        ]
        if not candidates:
            raise ExemplarGapError(label.value)

        def rank(item: tuple[int, Exemplar]) -> tuple[int, int, int]:
            pos, ex = item
            age_miss = 0 if (age_band is not None and ex.age_band is age_band) else 1
            cat_miss = 0 if (category is not None and ex.category is category) else 1
            return (age_miss, cat_miss, pos)

        best = min(candidates, key=rank)[1]
        if style is PromptStyle.NON_REASONING and best.reasoning is not None:
            best = dataclasses.replace(best, reasoning=None)
        chosen.append(best)
    return (chosen[0], chosen[1], chosen[2])
