"""Shared fixtures plus the acceptance-criterion reporting hook."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from jalign.store.project import Project

# --- acceptance criterion reporting -------------------------------------------
#
# test_acceptance.py tags each criterion test with @criterion("..."); the terminal
# summary then prints one PASS/FAIL line per criterion so the verdict is readable
# without digging through the pytest output.

_CRITERIA: dict[str, str] = {}
_RESULTS: list[tuple[str, str]] = []


def criterion(label: str):
    def decorate(fn):
        _CRITERIA[fn.__name__] = label
        return fn

    return decorate


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    base_name = item.name.split("[")[0]
    if report.when == "call" and base_name in _CRITERIA:
        status = "PASS" if report.passed else "FAIL"
        _RESULTS.append((status, _CRITERIA[base_name]))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for status, label in _RESULTS:
        terminalreporter.write_line(f"{status}  {label}")


# --- fixtures -------------------------------------------------------------------


def small_manifest_doc() -> dict:
    return {
        "schema_version": 1,
        "videos": [
            {
                "video_id": "vid-a",
                "uri": "media/a.mp4",
                "duration_s": 12.3,
                "age_band": "2-4",
                "category": "daily_life",
                "title": "block play",
            },
            {
                "video_id": "vid-b",
                "uri": "media/b.mp4",
                "duration_s": 10.4,
                "age_band": "4-6",
                "category": "language_cognitive",
            },
        ],
    }


@pytest.fixture
def manifest_doc() -> dict:
    return small_manifest_doc()


@pytest.fixture
def project(tmp_path: Path, manifest_doc: dict) -> Project:
    """An ingested two-video project in a temp directory."""
    proj = Project(tmp_path / "proj")
    proj.ingest(manifest_doc)
    return proj


@pytest.fixture
def manifest_file(tmp_path: Path, manifest_doc: dict) -> Path:
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest_doc), encoding="utf-8")
    return path
