"""Pipeline orchestration: describe, judge and evaluate runs over a project."""

from jalign.pipeline.describe import run_describe
from jalign.pipeline.evaluate import load_reference_labels, run_evaluate
from jalign.pipeline.judge import run_judge
from jalign.pipeline.runs import RunDir, RunRecord, compute_run_id, timestamp

__all__ = [
    "RunDir",
    "RunRecord",
    "compute_run_id",
    "load_reference_labels",
    "run_describe",
    "run_evaluate",
    "run_judge",
    "timestamp",
]
