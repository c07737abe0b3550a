"""Radar-style export of alignment reports and a plain-text summary table."""

from __future__ import annotations

from typing import Any, Mapping, Sequence

from jalign.core.labels import LABEL_ORDER
from jalign.errors import InvalidInputError, ValidationError
from jalign.evaluation.alignment import AlignmentReport

RADAR_METRICS = ("precision", "recall", "f1")


def radar_axes() -> list[str]:
    """Nine axes: each label crossed with each metric, in reporting order."""
    return [f"{label.value} {metric}" for label in LABEL_ORDER for metric in RADAR_METRICS]


def _series_values(report: AlignmentReport) -> list[float]:
    return [
        report.classes[label][metric] for label in LABEL_ORDER for metric in RADAR_METRICS
    ]


def export_radar(reports: Sequence[AlignmentReport]) -> dict[str, Any]:
    """One series per (rater, condition, model); embeds the full reports so the
    export round-trips losslessly."""
    if not reports:
        raise InvalidInputError("no reports to export")
    raters: dict[str, list[dict[str, Any]]] = {}
    for report in reports:
        raters.setdefault(report.rater_id, []).append(
            {
                "condition": report.condition.slug if report.condition else None,
                "model_name": report.model_name,
                "values": _series_values(report),
            }
        )
    return {
        "schema_version": 1,
        "axes": radar_axes(),
        "raters": [
            {"rater_id": rater_id, "series": series}
            for rater_id, series in sorted(raters.items())
        ],
        "reports": [report.to_doc() for report in reports],
    }


def parse_radar(doc: Mapping[str, Any]) -> list[AlignmentReport]:
    try:
        return [AlignmentReport.from_doc(rdoc) for rdoc in doc["reports"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(str(exc), field_path="radar") from exc


def summary_table(reports: Sequence[AlignmentReport]) -> str:
    """Fixed-width per-rater, per-condition metric table."""
    header = f"{'rater':<10}{'condition':<16}{'model':<16}"
    for label in LABEL_ORDER:
        header += f"{label.value[:3] + ' P':>8}{label.value[:3] + ' R':>8}{label.value[:3] + ' F1':>9}"
    header += f"{'macro F1':>10}"
    lines = [header, "-" * len(header)]
    for report in sorted(
        reports,
        key=lambda r: (r.rater_id, r.condition.slug if r.condition else "", r.model_name),
    ):
        row = (
            f"{report.rater_id:<10}"
            f"{(report.condition.slug if report.condition else '-'):<16}"
            f"{report.model_name:<16}"
        )
        for label in LABEL_ORDER:
            metrics = report.classes[label]
            row += (
                f"{metrics['precision']:>8.2f}{metrics['recall']:>8.2f}{metrics['f1']:>9.2f}"
            )
        row += f"{report.macro['f1']:>10.2f}"
        lines.append(row)
    return "\n".join(lines) + "\n"
