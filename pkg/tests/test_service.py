"""HTTP service behaviour, driven through the in-process test client."""

import json

import pytest
from fastapi.testclient import TestClient

from conftest import small_manifest_doc
from jalign.service import create_app
from jalign.store.project import Project

MEDIA_BYTES = b"0123456789" * 4  # 40 bytes


@pytest.fixture
def client(project):
    (project.root / "media").mkdir()
    (project.root / "media" / "a.mp4").write_bytes(MEDIA_BYTES)
    with TestClient(create_app(project.root)) as tc:
        yield tc


def open_session(client, rater="r1", video="vid-a"):
    response = client.post("/sessions", json={"rater_id": rater, "video_id": video})
    assert response.status_code == 200, response.text
    return response.json()


def put_intervals(client, session_id, version, intervals, **kwargs):
    return client.put(
        f"/sessions/{session_id}/intervals",
        json={"expected_version": version, "intervals": intervals, **kwargs},
    )


# --- health and videos ---


def test_health_reports_initialized(client):
    body = client.get("/health").json()
    assert body == {"status": "ok", "initialized": True}


def test_health_on_empty_project(tmp_path):
    with TestClient(create_app(tmp_path / "nothing")) as tc:
        assert tc.get("/health").json()["initialized"] is False
        assert tc.get("/videos").status_code == 404


def test_list_videos_with_segment_counts(client):
    videos = {v["video_id"]: v for v in client.get("/videos").json()}
    assert videos["vid-a"]["segment_count"] == 3
    assert videos["vid-b"]["segment_count"] == 2
    assert videos["vid-a"]["age_band"] == "2-4"


def test_video_segments(client):
    segments = client.get("/videos/vid-a/segments").json()
    assert [(s["start_s"], s["end_s"]) for s in segments] == [
        (0.0, 5.0), (5.0, 10.0), (10.0, 12.3),
    ]
    assert segments[0]["segment_id"] == "vid-a:0"


def test_unknown_video_is_404_with_error_body(client):
    response = client.get("/videos/vid-z/segments")
    assert response.status_code == 404
    body = response.json()
    assert body["error"] == "not_found"
    assert "vid-z" in body["message"]


# --- media serving ---


def test_media_full_body(client):
    response = client.get("/videos/vid-a/media")
    assert response.status_code == 200
    assert response.content == MEDIA_BYTES
    assert response.headers["accept-ranges"] == "bytes"


def test_media_byte_range(client):
    response = client.get("/videos/vid-a/media", headers={"Range": "bytes=0-9"})
    assert response.status_code == 206
    assert response.content == MEDIA_BYTES[:10]
    assert response.headers["content-range"] == "bytes 0-9/40"
    assert response.headers["content-length"] == "10"


def test_media_open_ended_range(client):
    response = client.get("/videos/vid-a/media", headers={"Range": "bytes=35-"})
    assert response.status_code == 206
    assert response.content == MEDIA_BYTES[35:]
    assert response.headers["content-range"] == "bytes 35-39/40"


def test_media_suffix_range(client):
    response = client.get("/videos/vid-a/media", headers={"Range": "bytes=-5"})
    assert response.status_code == 206
    assert response.content == MEDIA_BYTES[-5:]
    assert response.headers["content-range"] == "bytes 35-39/40"


def test_media_range_clamped_to_size(client):
    response = client.get("/videos/vid-a/media", headers={"Range": "bytes=30-999"})
    assert response.status_code == 206
    assert response.content == MEDIA_BYTES[30:]


def test_media_unsatisfiable_range(client):
    response = client.get("/videos/vid-a/media", headers={"Range": "bytes=40-50"})
    assert response.status_code == 416
    assert response.headers["content-range"] == "bytes */40"


def test_media_malformed_range(client):
    for header in ("bytes=-", "chunks=0-5", "bytes=a-b"):
        response = client.get("/videos/vid-a/media", headers={"Range": header})
        assert response.status_code == 416, header


def test_media_missing_file_is_404(client):
    response = client.get("/videos/vid-b/media")  # manifest lists media/b.mp4, never created
    assert response.status_code == 404


def test_media_http_uri_redirects(tmp_path):
    doc = small_manifest_doc()
    doc["videos"][0]["uri"] = "https://media.example/a.mp4"
    project = Project(tmp_path / "p")
    project.ingest(doc)
    with TestClient(create_app(project.root)) as tc:
        response = tc.get("/videos/vid-a/media", follow_redirects=False)
        assert response.status_code == 307
        assert response.headers["location"] == "https://media.example/a.mp4"


# --- sessions ---


def test_create_session_and_idempotent_reopen(client):
    first = open_session(client)
    assert first["session_id"] == "r1--vid-a"
    assert first["version"] == 0
    assert first["sealed"] is False
    again = open_session(client)
    assert again == first


def test_create_session_unknown_video_404(client):
    response = client.post("/sessions", json={"rater_id": "r1", "video_id": "nope"})
    assert response.status_code == 404


def test_get_unknown_session_404(client):
    assert client.get("/sessions/ghost--vid-a").status_code == 404


def test_put_intervals_bumps_version_and_sorts(client):
    session = open_session(client)
    response = put_intervals(client, session["session_id"], 0, [
        {"start_s": 6.0, "end_s": 8.0, "mark": "Poor"},
        {"start_s": 0.0, "end_s": 4.0, "mark": "Strong", "note": "shared gaze"},
    ])
    assert response.status_code == 200
    body = response.json()
    assert body["version"] == 1
    assert [iv["start_s"] for iv in body["intervals"]] == [0.0, 6.0]
    assert body["intervals"][0]["note"] == "shared gaze"


def test_put_intervals_stale_version_conflict(client):
    session = open_session(client)
    put_intervals(client, session["session_id"], 0, [])
    response = put_intervals(client, session["session_id"], 0, [])
    assert response.status_code == 409
    assert response.json()["error"] == "conflict"


def test_put_intervals_overlap_rejected(client):
    session = open_session(client)
    response = put_intervals(client, session["session_id"], 0, [
        {"start_s": 0.0, "end_s": 5.0, "mark": "Strong"},
        {"start_s": 4.0, "end_s": 6.0, "mark": "Poor"},
    ])
    assert response.status_code == 422
    assert response.json()["error"] == "validation"


def test_put_intervals_moderate_mark_rejected(client):
    session = open_session(client)
    response = put_intervals(client, session["session_id"], 0, [
        {"start_s": 0.0, "end_s": 2.0, "mark": "Moderate"},
    ])
    assert response.status_code == 422
    assert "Moderate spans are implicit" in response.text


def test_put_intervals_beyond_duration_rejected(client):
    session = open_session(client)
    response = put_intervals(client, session["session_id"], 0, [
        {"start_s": 10.0, "end_s": 99.0, "mark": "Strong"},
    ])
    assert response.status_code == 422


def test_put_intervals_unknown_label_rejected(client):
    session = open_session(client)
    response = put_intervals(client, session["session_id"], 0, [
        {"start_s": 0.0, "end_s": 2.0, "mark": "Excellent"},
    ])
    assert response.status_code == 422


def test_submit_seals_and_writes_annotation_file(client, project):
    session = open_session(client)
    put_intervals(client, session["session_id"], 0, [
        {"start_s": 0.0, "end_s": 5.0, "mark": "Strong"},
    ])
    response = client.post(
        f"/sessions/{session['session_id']}/submit", json={"expected_version": 1}
    )
    assert response.status_code == 200
    assert response.json()["sealed"] is True
    assert response.json()["version"] == 2

    annotation_file = project.paths.annotation_file("r1", "vid-a")
    rows = [json.loads(line) for line in annotation_file.read_text().splitlines()]
    assert rows == [{
        "rater_id": "r1", "video_id": "vid-a",
        "start_s": 0.0, "end_s": 5.0, "mark": "Strong", "note": "",
    }]

    after = put_intervals(client, session["session_id"], 2, [])
    assert after.status_code == 409
    resubmit = client.post(
        f"/sessions/{session['session_id']}/submit", json={"expected_version": 2}
    )
    assert resubmit.status_code == 409


def test_projection_reflects_current_intervals(client):
    session = open_session(client)  # vid-a: [0,5) [5,10) [10,12.3)
    put_intervals(client, session["session_id"], 0, [
        {"start_s": 0.0, "end_s": 5.0, "mark": "Strong"},
        {"start_s": 10.0, "end_s": 12.3, "mark": "Poor"},
    ])
    body = client.get(f"/sessions/{session['session_id']}/projection").json()
    assert [item["label"] for item in body["labels"]] == ["Strong", "Moderate", "Poor"]
    assert body["rater_id"] == "r1"


# --- pipeline over HTTP ---


def submit_full_annotations(client, raters=("r1", "r2")):
    for rater in raters:
        for video in ("vid-a", "vid-b"):
            session = open_session(client, rater, video)
            marks = [{"start_s": 0.0, "end_s": 4.0, "mark": "Strong"}]
            version = put_intervals(
                client, session["session_id"], session["version"], marks
            ).json()["version"]
            client.post(
                f"/sessions/{session['session_id']}/submit",
                json={"expected_version": version},
            )


def test_pipeline_ingest_endpoint(tmp_path):
    with TestClient(create_app(tmp_path / "fresh")) as tc:
        response = tc.post("/pipeline/ingest", json={"manifest": small_manifest_doc()})
        assert response.status_code == 200
        assert response.json() == {"video_count": 2, "segment_count": 5}


def test_pipeline_ingest_invalid_manifest_422(tmp_path):
    with TestClient(create_app(tmp_path / "fresh")) as tc:
        response = tc.post("/pipeline/ingest", json={"manifest": {"videos": []}})
        assert response.status_code == 422
        assert response.json()["error"] == "validation"


def test_describe_then_judge_then_evaluate(client, project):
    describe = client.post("/pipeline/describe", json={}).json()
    assert describe["kind"] == "describe"
    assert describe["sealed"] is True
    assert "descriptions.jsonl" in describe["artifacts"]
    assert describe["run_id"].startswith("describe-")

    judge = client.post("/pipeline/judge", json={"backend": "mock"}).json()
    slugs = [run["condition"] for run in judge["runs"]]
    assert slugs == ["zero_plain", "zero_reasoning", "few_plain", "few_reasoning"]
    assert all(run["sealed"] for run in judge["runs"])

    submit_full_annotations(client)
    evaluate = client.post("/pipeline/evaluate", json={}).json()
    assert evaluate["kind"] == "evaluate"
    assert "reports/summary.txt" in evaluate["artifacts"]
    assert "reports/radar.json" in evaluate["artifacts"]
    assert "reports/distributions.json" in evaluate["artifacts"]

    listing = client.get("/runs", params={"kind": "evaluate"}).json()["runs"]
    assert [r["run_id"] for r in listing] == [evaluate["run_id"]]

    by_condition = client.get(
        "/runs", params={"kind": "judge", "condition": "few_plain"}
    ).json()["runs"]
    assert len(by_condition) == 1

    files = client.get(f"/runs/{evaluate['run_id']}/files").json()["files"]
    assert "reports/summary.txt" in files
    assert "run.json" in files

    summary = client.get(f"/runs/{evaluate['run_id']}/files/reports/summary.txt")
    assert summary.status_code == 200
    on_disk = (
        project.paths.run_dir(evaluate["run_id"]) / "reports" / "summary.txt"
    ).read_bytes()
    assert summary.content == on_disk


def test_evaluate_without_annotations_is_coverage_conflict(client):
    client.post("/pipeline/describe", json={})
    client.post("/pipeline/judge", json={})
    response = client.post("/pipeline/evaluate", json={})
    assert response.status_code == 409
    assert response.json()["error"] == "coverage"


def test_evaluate_without_judge_runs_is_404(client):
    submit_full_annotations(client)
    response = client.post("/pipeline/evaluate", json={})
    assert response.status_code == 404
    assert "zero_plain" in response.json()["message"]


def test_judge_with_unknown_condition_422(client):
    client.post("/pipeline/describe", json={})
    response = client.post("/pipeline/judge", json={"conditions": ["triple_shot"]})
    assert response.status_code == 422


def test_describe_scoped_to_one_video(client):
    body = client.post("/pipeline/describe", json={"video_ids": ["vid-b"]}).json()
    run_files = client.get(f"/runs/{body['run_id']}/files").json()["files"]
    assert "descriptions.jsonl" in run_files
    rows = client.get(
        f"/runs/{body['run_id']}/files/descriptions.jsonl"
    ).text.strip().splitlines()
    assert len(rows) == 2  # vid-b only: two segments
    assert all(json.loads(row)["video_id"] == "vid-b" for row in rows)


# --- runs ---


def test_get_unknown_run_404(client):
    assert client.get("/runs/describe-nope").status_code == 404
    assert client.get("/runs/describe-nope/files").status_code == 404


def test_run_file_path_escape_rejected(client):
    run = client.post("/pipeline/describe", json={}).json()
    response = client.get(
        f"/runs/{run['run_id']}/files/..%2F..%2Fmanifest.json"
    )
    assert response.status_code in (404, 422)
    # either the router refuses to match or the resolver rejects the escape;
    # the manifest must never be served either way
    if response.status_code == 422:
        assert response.json()["error"] == "validation"
    assert b"videos" not in response.content or response.status_code != 200


def test_run_file_unknown_name_404(client):
    run = client.post("/pipeline/describe", json={}).json()
    response = client.get(f"/runs/{run['run_id']}/files/reports/none.json")
    assert response.status_code == 404
