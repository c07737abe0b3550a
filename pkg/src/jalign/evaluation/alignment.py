"""Label alignment: confusion counting, per-class and macro precision/recall/F1."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Iterable, Mapping

from jalign.core.labels import LABEL_ORDER, JudgementLabel
from jalign.core.types import SegmentLabelSet
from jalign.errors import InvalidInputError, ValidationError
from jalign.prompts.types import PromptCondition

SegmentKey = tuple[str, int]


def round_half_up(value: float, decimals: int) -> float:
    """Half-up decimal rounding as the value prints, immune to binary dust."""
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ConfusionMatrix:
    """Reference labels on rows, predicted labels on columns, fixed label order."""

    labels: tuple[JudgementLabel, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != len(self.labels):
            raise InvalidInputError("confusion matrix must be square over the labels")
        if any(len(r) != len(self.labels) for r in self.rows):
            raise InvalidInputError("confusion matrix must be square over the labels")
        if any(cell < 0 for row in self.rows for cell in row):
            raise InvalidInputError("confusion counts must be non-negative")

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[JudgementLabel, JudgementLabel]]
    ) -> "ConfusionMatrix":
        """Count (reference, predicted) pairs."""
        index = {label: i for i, label in enumerate(LABEL_ORDER)}
        cells = [[0] * len(LABEL_ORDER) for _ in LABEL_ORDER]
        for reference, predicted in pairs:
            cells[index[reference]][index[predicted]] += 1
        return cls(labels=LABEL_ORDER, rows=tuple(tuple(r) for r in cells))

    def _i(self, label: JudgementLabel) -> int:
        return self.labels.index(label)

    def true_positives(self, label: JudgementLabel) -> int:
        i = self._i(label)
        return self.rows[i][i]

    def reference_count(self, label: JudgementLabel) -> int:
        return sum(self.rows[self._i(label)])

    def predicted_count(self, label: JudgementLabel) -> int:
        i = self._i(label)
        return sum(row[i] for row in self.rows)

    @property
    def total(self) -> int:
        return sum(cell for row in self.rows for cell in row)


@dataclass(frozen=True)
class ClassMetrics:
    """Unrounded metrics for one label class.

    precision is 0 when the class was never predicted, recall 0 when it never
    occurs in the reference, and F1 = 2PR/(P+R) with 0 when P+R = 0, so every
    value is always defined.
    """

    precision: float
    recall: float
    f1: float
    support: int
    predicted: int


def class_metrics(matrix: ConfusionMatrix, label: JudgementLabel) -> ClassMetrics:
    tp = matrix.true_positives(label)
    predicted = matrix.predicted_count(label)
    support = matrix.reference_count(label)
    precision = tp / predicted if predicted else 0.0
    recall = tp / support if support else 0.0
    f1 = (2 * precision * recall / (precision + recall)) if precision + recall > 0 else 0.0
    return ClassMetrics(
        precision=precision, recall=recall, f1=f1, support=support, predicted=predicted
    )


@dataclass(frozen=True)
class AlignmentReport:
    """Model-vs-rater agreement over one pooled segment set.

    Class and macro values are reported half-up at two decimals; the confusion
    matrix keeps the exact counts so nothing is lost to rounding.
    """

    rater_id: str
    model_name: str
    condition: PromptCondition | None
    confusion: ConfusionMatrix
    classes: Mapping[JudgementLabel, Mapping[str, float]]
    macro: Mapping[str, float]
    segment_count: int

    def to_doc(self) -> dict[str, Any]:
        return {
            "schema_version": 1,
            "rater_id": self.rater_id,
            "model_name": self.model_name,
            "condition": self.condition.slug if self.condition else None,
            "segment_count": self.segment_count,
            "labels": [label.value for label in self.confusion.labels],
            "confusion": [list(row) for row in self.confusion.rows],
            "classes": {
                label.value: dict(metrics) for label, metrics in self.classes.items()
            },
            "macro": dict(self.macro),
        }

    @classmethod
    def from_doc(cls, doc: Mapping[str, Any]) -> "AlignmentReport":
        try:
            labels = tuple(JudgementLabel.parse(v) for v in doc["labels"])
            condition = doc.get("condition")
            return cls(
                rater_id=doc["rater_id"],
                model_name=doc.get("model_name", ""),
                condition=PromptCondition.parse(condition) if condition else None,
                confusion=ConfusionMatrix(
                    labels=labels,
                    rows=tuple(tuple(int(c) for c in row) for row in doc["confusion"]),
                ),
                classes={
                    JudgementLabel.parse(name): dict(metrics)
                    for name, metrics in doc["classes"].items()
                },
                macro=dict(doc["macro"]),
                segment_count=int(doc["segment_count"]),
            )
        except (KeyError, TypeError, InvalidInputError) as exc:
            raise ValidationError(str(exc), field_path="alignment_report") from exc


def _as_label_mapping(
    data: SegmentLabelSet | Mapping[SegmentKey, JudgementLabel], name: str
) -> dict[SegmentKey, JudgementLabel]:
    if isinstance(data, SegmentLabelSet):
        return {(data.video_id, i): label for i, label in enumerate(data.labels)}
    if not data:
        raise InvalidInputError(f"{name} labels must be non-empty")
    return dict(data)


def compute_alignment(
    predicted: SegmentLabelSet | Mapping[SegmentKey, JudgementLabel],
    reference: SegmentLabelSet | Mapping[SegmentKey, JudgementLabel],
    *,
    rater_id: str,
    model_name: str = "",
    condition: PromptCondition | None = None,
) -> AlignmentReport:
    """Score predictions against one rater's reference labels.

    Both sides must cover exactly the same segments; a coverage mismatch is an
    input error naming the offending keys.
    """
    pred = _as_label_mapping(predicted, "predicted")
    ref = _as_label_mapping(reference, "reference")
    if pred.keys() != ref.keys():
        missing = sorted(ref.keys() - pred.keys())[:5]
        surplus = sorted(pred.keys() - ref.keys())[:5]
        raise InvalidInputError(
            "predicted and reference labels cover different segments "
            f"(missing from predictions: {missing}, unexpected: {surplus})"
        )

    matrix = ConfusionMatrix.from_pairs((ref[key], pred[key]) for key in sorted(ref))
    exact = {label: class_metrics(matrix, label) for label in LABEL_ORDER}
    classes = {
        label: {
            "precision": round_half_up(m.precision, 2),
            "recall": round_half_up(m.recall, 2),
            "f1": round_half_up(m.f1, 2),
            "support": m.support,
            "predicted": m.predicted,
        }
        for label, m in exact.items()
    }
    macro = {
        name: round_half_up(
            sum(getattr(exact[label], name) for label in LABEL_ORDER) / len(LABEL_ORDER), 2
        )
        for name in ("precision", "recall", "f1")
    }
    return AlignmentReport(
        rater_id=rater_id,
        model_name=model_name,
        condition=condition,
        confusion=matrix,
        classes=classes,
        macro=macro,
        segment_count=matrix.total,
    )
