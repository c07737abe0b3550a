"""Closed enumerations used throughout the pipeline."""

from __future__ import annotations

from enum import Enum

from jalign.errors import InvalidInputError, InvalidLabelError


class JudgementLabel(str, Enum):
    """Joint-attention quality label. Nominal, no ordering semantics."""

    STRONG = "Strong"
    MODERATE = "Moderate"
    POOR = "Poor"

    @classmethod
    def parse(cls, text: str) -> "JudgementLabel":
        """Case-insensitive lookup; anything outside the three values is rejected."""
        cleaned = text.strip()
        for label in cls:
            if cleaned.lower() == label.value.lower():
                return label
        raise InvalidLabelError(text)


# Display and reporting order everywhere.
LABEL_ORDER: tuple[JudgementLabel, ...] = (
    JudgementLabel.STRONG,
    JudgementLabel.MODERATE,
    JudgementLabel.POOR,
)


class Role(str, Enum):
    PARENT = "parent"
    CHILD = "child"


class CueField(str, Enum):
    """Behavioural cue channels. engagement is an optional extension field."""

    GAZE = "gaze"
    ACTION = "action"
    VOCALISATION = "vocalisation"
    ENGAGEMENT = "engagement"


CORE_CUE_FIELDS: tuple[CueField, ...] = (
    CueField.GAZE,
    CueField.ACTION,
    CueField.VOCALISATION,
)


class AgeBand(str, Enum):
    YEARS_0_2 = "0-2"
    YEARS_2_4 = "2-4"
    YEARS_4_6 = "4-6"
    YEARS_6_8 = "6-8"

    @classmethod
    def parse(cls, text: str) -> "AgeBand":
        # Tolerate the typographic en dash in incoming documents.
        cleaned = text.strip().replace("–", "-")
        for band in cls:
            if cleaned == band.value:
                return band
        raise InvalidInputError(f"unknown age band: {text!r}")


class Category(str, Enum):
    BEHAVIOUR_GUIDANCE = "behaviour_guidance"
    LANGUAGE_COGNITIVE = "language_cognitive"
    DAILY_LIFE = "daily_life"

    @classmethod
    def parse(cls, text: str) -> "Category":
        cleaned = text.strip()
        for cat in cls:
            if cleaned == cat.value:
                return cat
        raise InvalidInputError(f"unknown video category: {text!r}")
