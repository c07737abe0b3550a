"""Cross-rater comparison: which rater does the model track best."""

from __future__ import annotations

from typing import Any, Sequence

from jalign.core.labels import LABEL_ORDER
from jalign.errors import InvalidInputError
from jalign.evaluation.alignment import AlignmentReport


def _ranked(entries: list[tuple[str, float]]) -> tuple[list[dict[str, Any]], list[list[str]]]:
    """Competition-rank by descending value; equal values share a rank and are
    reported as explicit tie groups."""
    ordered = sorted(entries, key=lambda e: (-e[1], e[0]))
    rows: list[dict[str, Any]] = []
    by_value: dict[float, list[str]] = {}
    for position, (name, value) in enumerate(ordered, start=1):
        tied_with_previous = position > 1 and ordered[position - 2][1] == value
        rank = rows[-1]["rank"] if tied_with_previous else position
        rows.append({"rater_id": name, "value": value, "rank": rank})
        by_value.setdefault(value, []).append(name)
    ties = [sorted(names) for value, names in sorted(by_value.items()) if len(names) > 1]
    return rows, ties


def compare_raters(reports: Sequence[AlignmentReport]) -> dict[str, Any]:
    """Rank raters by macro F1 within each condition; ties are explicit, and
    per-class F1 orderings ride along."""
    if not reports:
        raise InvalidInputError("no reports to compare")
    by_condition: dict[str, list[AlignmentReport]] = {}
    for report in reports:
        slug = report.condition.slug if report.condition else "-"
        by_condition.setdefault(slug, []).append(report)

    out: dict[str, Any] = {"schema_version": 1, "per_condition": {}}
    for slug, group in sorted(by_condition.items()):
        seen: set[str] = set()
        for report in group:
            if report.rater_id in seen:
                raise InvalidInputError(
                    f"duplicate report for rater {report.rater_id!r} in condition {slug}"
                )
            seen.add(report.rater_id)
        macro_rows, macro_ties = _ranked(
            [(r.rater_id, r.macro["f1"]) for r in group]
        )
        per_class = {}
        for label in LABEL_ORDER:
            class_rows, class_ties = _ranked(
                [(r.rater_id, r.classes[label]["f1"]) for r in group]
            )
            per_class[label.value] = {"ranking": class_rows, "ties": class_ties}
        out["per_condition"][slug] = {
            "by_macro_f1": macro_rows,
            "ties": macro_ties,
            "by_class_f1": per_class,
        }
    return out
