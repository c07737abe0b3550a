"""Persistence layer: canonical bytes, document families, project layout."""

import json

import pytest

from jalign.core.labels import AgeBand, Category, JudgementLabel
from jalign.core.types import IntervalAnnotation, SegmentLabelSet, SegmentRef
from jalign.errors import (
    ConfigurationError,
    NotFoundError,
    ValidationError,
    VersionError,
)
from jalign.gateway.config import MOCK_BACKEND
from jalign.prompts.types import Exemplar, JudgementOutput
from jalign.store import (
    Project,
    ProjectConfig,
    canonical_json_bytes,
    canonical_jsonl_bytes,
    doc_hash,
    path_slug,
    read_json,
    read_jsonl,
    write_atomic,
)
from jalign.store.config import (
    MediaSlicerConfig,
    PromptSettings,
    config_to_doc,
    doc_to_config,
)
from jalign.store.families import (
    doc_to_label_set,
    exemplar_to_row,
    interval_to_row,
    judgement_to_row,
    label_set_to_doc,
    load_manifest,
    record_to_row,
    row_to_exemplar,
    row_to_interval,
    row_to_judgement,
    row_to_record,
    save_manifest,
    validate_manifest_doc,
)
from golden_inputs import single_record


# --- canonical bytes ---


def test_canonical_json_is_insertion_order_independent():
    a = {"b": 1, "a": [3, 2], "nested": {"y": 1, "x": 2}}
    b = {"nested": {"x": 2, "y": 1}, "a": [3, 2], "b": 1}
    assert canonical_json_bytes(a) == canonical_json_bytes(b)
    assert doc_hash(a) == doc_hash(b)


def test_canonical_json_keeps_unicode_and_trailing_newline():
    data = canonical_json_bytes({"text": "child’s gaze — sustained"})
    assert data.endswith(b"\n")
    assert "child’s gaze — sustained".encode("utf-8") in data


def test_canonical_json_rejects_nan():
    with pytest.raises(ValueError):
        canonical_json_bytes({"x": float("nan")})


def test_canonical_jsonl_one_line_per_row():
    data = canonical_jsonl_bytes([{"b": 1, "a": 2}, {"c": 3}])
    assert data == b'{"a":2,"b":1}\n{"c":3}\n'


def test_doc_hash_differs_on_content_change():
    assert doc_hash({"x": 1}) != doc_hash({"x": 2})


def test_write_atomic_leaves_no_temp_files(tmp_path):
    target = tmp_path / "deep" / "doc.json"
    write_atomic(target, b"one")
    write_atomic(target, b"two")
    assert target.read_bytes() == b"two"
    assert [p.name for p in target.parent.iterdir()] == ["doc.json"]


def test_read_json_malformed_names_the_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValidationError, match="malformed JSON"):
        read_json(bad)


def test_read_json_missing_file_raises_file_not_found(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_json(tmp_path / "absent.json")


def test_read_jsonl_reports_line_number(tmp_path):
    stream = tmp_path / "rows.jsonl"
    stream.write_text('{"ok": 1}\n\n{broken\n', encoding="utf-8")
    with pytest.raises(ValidationError, match=":3"):
        list(read_jsonl(stream))


def test_read_jsonl_skips_blank_lines(tmp_path):
    stream = tmp_path / "rows.jsonl"
    stream.write_text('{"a": 1}\n\n  \n{"a": 2}\n', encoding="utf-8")
    assert list(read_jsonl(stream)) == [{"a": 1}, {"a": 2}]


def test_path_slug_replaces_unsafe_characters():
    assert path_slug("rater one/two") == "rater_one_two"
    assert path_slug("ok-id_1.2") == "ok-id_1.2"


# --- manifest family ---


def test_manifest_round_trip_preserves_unknown_fields(tmp_path, manifest_doc):
    manifest_doc["lab_notes"] = {"collected_by": "team-b"}
    manifest_doc["videos"][0]["consent_form"] = "cf-17"
    manifest, errors = validate_manifest_doc(manifest_doc)
    assert errors == []
    path = tmp_path / "manifest.json"
    save_manifest(path, manifest)
    reloaded = load_manifest(path)
    assert reloaded.extra["lab_notes"] == {"collected_by": "team-b"}
    assert reloaded.video("vid-a").extra["consent_form"] == "cf-17"
    assert reloaded.video("vid-b").duration_s == 10.4
    assert reloaded.video("vid-a").age_band is AgeBand.YEARS_2_4
    assert reloaded.video("vid-b").category is Category.LANGUAGE_COGNITIVE


def test_manifest_save_is_byte_stable(tmp_path, manifest_doc):
    manifest, _ = validate_manifest_doc(manifest_doc)
    p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
    save_manifest(p1, manifest)
    save_manifest(p2, load_manifest(p1))
    assert p1.read_bytes() == p2.read_bytes()


def test_manifest_validation_collects_every_problem(manifest_doc):
    manifest_doc["videos"][0]["duration_s"] = -3
    manifest_doc["videos"][1]["age_band"] = "9-12"
    manifest_doc["videos"].append(dict(manifest_doc["videos"][1]))
    manifest, errors = validate_manifest_doc(manifest_doc)
    assert manifest is None
    text = "\n".join(errors)
    assert "videos[0].duration_s" in text
    assert "videos[1].age_band" in text
    assert "duplicate" in text


def test_manifest_requires_at_least_one_video():
    _, errors = validate_manifest_doc({"schema_version": 1, "videos": []})
    assert any("at least one video" in e for e in errors)


def test_manifest_newer_schema_version_rejected(manifest_doc):
    manifest_doc["schema_version"] = 2
    manifest, errors = validate_manifest_doc(manifest_doc)
    assert manifest is None
    assert any("newer than supported" in e for e in errors)


def test_manifest_en_dash_age_band_accepted(manifest_doc):
    manifest_doc["videos"][0]["age_band"] = "2–4"
    manifest, errors = validate_manifest_doc(manifest_doc)
    assert errors == []
    assert manifest.video("vid-a").age_band is AgeBand.YEARS_2_4


# --- interval / label-set / exemplar / record / judgement rows ---


def test_interval_row_round_trip():
    iv = IntervalAnnotation(
        rater_id="r1", video_id="v1", start_s=1.5, end_s=4.0,
        mark=JudgementLabel.STRONG, note="mutual gaze",
    )
    assert row_to_interval(interval_to_row(iv)) == iv


def test_interval_row_bad_mark_rejected():
    row = interval_to_row(
        IntervalAnnotation("r1", "v1", 0.0, 2.0, JudgementLabel.POOR)
    )
    row["mark"] = "Great"
    with pytest.raises(ValidationError):
        row_to_interval(row)


def test_label_set_doc_round_trip():
    ls = SegmentLabelSet(
        rater_id="r1", video_id="v1",
        labels=(JudgementLabel.STRONG, JudgementLabel.MODERATE, JudgementLabel.POOR),
    )
    assert doc_to_label_set(label_set_to_doc(ls)) == ls


def test_label_set_newer_schema_rejected():
    doc = label_set_to_doc(
        SegmentLabelSet("r1", "v1", (JudgementLabel.POOR,))
    )
    doc["schema_version"] = 99
    with pytest.raises(VersionError):
        doc_to_label_set(doc)


def test_exemplar_row_round_trip_with_everything():
    ex = Exemplar(
        exemplar_id="ex-1",
        observation="Gaze: [Parent] Looked. [Child] Looked back.",
        judgement=JudgementLabel.MODERATE,
        reasoning="Shared but brief.",
        unanimous=True,
        source_segment=SegmentRef("v1", 2, 10.0, 15.0),
        age_band=AgeBand.YEARS_2_4,
        category=Category.DAILY_LIFE,
        extra={"added_by": "curation-pass-3"},
    )
    back = row_to_exemplar(exemplar_to_row(ex))
    assert back == ex
    assert back.extra == {"added_by": "curation-pass-3"}


def test_exemplar_row_minimal_defaults():
    row = {
        "exemplar_id": "ex-2",
        "observation": "Gaze: [Parent] Looked away. [Child] Played.",
        "judgement": "poor",
    }
    ex = row_to_exemplar(row)
    assert ex.judgement is JudgementLabel.POOR
    assert not ex.unanimous
    assert ex.reasoning is None and ex.age_band is None


def test_behaviour_record_row_round_trip():
    (record,) = single_record()
    row = record_to_row(record)
    assert "engagement" not in row["parent"]
    assert row_to_record(row) == record


def test_behaviour_record_bad_row_rejected():
    row = record_to_row(single_record()[0])
    del row["parent"]["gaze"]
    with pytest.raises(ValidationError):
        row_to_record(row)


def test_judgement_row_round_trip():
    out = JudgementOutput(
        segment_index=3, label=JudgementLabel.STRONG,
        observation_text="Shared focus.", reasoning_text="Sustained gaze.",
    )
    video_id, index, back = row_to_judgement(judgement_to_row("v9", 3, out))
    assert (video_id, index) == ("v9", 3)
    assert back == out


# --- config family ---


def test_config_round_trip_preserves_extras():
    config = ProjectConfig(
        backends={"mock": MOCK_BACKEND},
        prompts=PromptSettings(template_version="v1", engagement_enabled=True,
                               describe_chunk_size=2, judge_chunk_size=13),
        media_slicer=MediaSlicerConfig(command="clip {input} {start} {end} {output}"),
        extra={"site": "lab-3"},
    )
    back = doc_to_config(config_to_doc(config))
    assert back.prompts == config.prompts
    assert back.media_slicer == config.media_slicer
    assert back.extra == {"site": "lab-3"}
    assert back.backends["mock"].kind is MOCK_BACKEND.kind


def test_config_newer_schema_rejected():
    doc = config_to_doc(ProjectConfig())
    doc["schema_version"] = 2
    with pytest.raises(VersionError):
        doc_to_config(doc)


def test_backend_spec_resolution():
    config = ProjectConfig(backends={"mock": MOCK_BACKEND})
    assert config.backend("mock") is MOCK_BACKEND
    with pytest.raises(ConfigurationError):
        config.backend("wire:absent")
    with pytest.raises(ConfigurationError):
        config.backend("hallucinate")


# --- project layout ---


def test_ingest_creates_layout(project):
    paths = project.paths
    assert project.is_initialized()
    assert paths.manifest.is_file()
    assert paths.config.is_file()
    assert paths.exemplars_file.is_file()
    assert paths.annotations_dir.is_dir()
    assert paths.runs_dir.is_dir()
    assert len(project.exemplars()) == 3


def test_ingest_rejects_bad_manifest(tmp_path):
    with pytest.raises(ValidationError):
        Project(tmp_path / "p").ingest({"videos": [{"video_id": ""}]})


def test_video_lookup(project):
    assert project.video("vid-a").title == "block play"
    with pytest.raises(NotFoundError):
        project.video("vid-z")


def test_segments_follow_manifest_rule(project):
    segs = project.segments_for(project.video("vid-b"))
    assert [s.index for s in segs] == [0, 1]
    assert segs[-1].end_s == 10.4


def test_uninitialized_project_manifest_raises(tmp_path):
    proj = Project(tmp_path / "empty")
    assert not proj.is_initialized()
    with pytest.raises(NotFoundError, match="ingest"):
        proj.manifest()


def test_raters_skips_underscore_dirs(project):
    (project.paths.annotations_dir / "rater-2").mkdir()
    (project.paths.annotations_dir / "rater-1").mkdir()
    (project.paths.annotations_dir / "_sessions").mkdir(exist_ok=True)
    assert project.raters() == ["rater-1", "rater-2"]


def test_run_registry_appends_and_dedupes(project):
    project.register_run("describe-aaa", "describe", None)
    project.register_run("judge-zero_plain-bbb", "judge", "zero_plain")
    project.register_run("describe-aaa", "describe", None)  # no-op
    entries = project.run_registry()
    assert [e["seq"] for e in entries] == [0, 1]
    assert project.latest_run_id("describe") == "describe-aaa"


def test_latest_run_id_filters_by_condition(project):
    project.register_run("judge-zero_plain-one", "judge", "zero_plain")
    project.register_run("judge-few_plain-two", "judge", "few_plain")
    project.register_run("judge-zero_plain-three", "judge", "zero_plain")
    assert project.latest_run_id("judge", "zero_plain") == "judge-zero_plain-three"
    assert project.latest_run_id("judge", "few_plain") == "judge-few_plain-two"
    assert project.latest_run_id("evaluate") is None


def test_ingest_twice_keeps_existing_config(project, manifest_doc):
    config_path = project.paths.config
    original = json.loads(config_path.read_text(encoding="utf-8"))
    original["note"] = "hand-edited"
    config_path.write_text(json.dumps(original), encoding="utf-8")
    project.ingest(manifest_doc)
    again = json.loads(config_path.read_text(encoding="utf-8"))
    assert again.get("note") == "hand-edited"
