"""Tests for the HTTP service endpoints."""

import base64

import numpy as np
import pytest

import fusetrack
from conftest import drift_spec, frames_b64
from fusetrack.sequences import format_box_text, parse_box_text
from fusetrack.synth import generate


@pytest.fixture()
def drift_payload():
    seq = generate(drift_spec(frames=4))
    return {
        "frames_b64": frames_b64(seq),
        "groundtruth_text": format_box_text(seq.gt),
    }, seq


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    data = resp.json()
    assert data["status"] == "ok"
    assert data["version"] == fusetrack.__version__


def test_track_endpoint_returns_full_trajectory(client, drift_payload):
    payload, seq = drift_payload
    resp = client.post("/track", json=payload)
    assert resp.status_code == 200
    data = resp.json()
    assert data["frame_count"] == 4
    boxes = parse_box_text(data["results_text"], origin="results")
    assert len(boxes) == 4
    # frame 1 echoes the init box; json boxes are 1-based
    assert boxes[0].x == seq.gt[0].x
    assert data["boxes"][0][0] == seq.gt[0].x + 1
    assert data["boxes"][0][2] == seq.gt[0].w
    assert len(data["peaks_fused"]) == 4
    assert data["peaks_fused"][0] == 0.0
    assert data["updated"][0] is False
    assert all(data["updated"][1:])
    assert data["fps"] > 0


def test_track_accepts_config_and_features(client, drift_payload):
    payload, _ = drift_payload
    payload["config_text"] = "search_scale = 2.5\nlambda = 0.01\n"
    payload["features"] = "gray,hog"
    resp = client.post("/track", json=payload)
    assert resp.status_code == 200
    # histogram model disabled: its peaks stay at the placeholder
    assert all(p == 0.0 for p in resp.json()["peaks_hist"])


def test_track_rejects_bad_inputs(client, drift_payload):
    payload, _ = drift_payload
    bad = dict(payload, config_text="bogus = 1\n")
    resp = client.post("/track", json=bad)
    assert resp.status_code == 400
    assert "unknown key" in resp.json()["detail"]

    bad = dict(payload, frames_b64=["!!!not-base64!!!"] * 2)
    resp = client.post("/track", json=bad)
    assert resp.status_code == 400
    assert "base64" in resp.json()["detail"]

    bad = dict(payload, groundtruth_text="1,1\n")
    assert client.post("/track", json=bad).status_code == 400

    resp = client.post("/track", json={"groundtruth_text": "1,1,5,5\n"})
    assert resp.status_code == 422  # schema-level: frames_b64 missing


def test_track_rejects_bad_cn_table(client, drift_payload):
    payload, _ = drift_payload
    bad = dict(payload, cn_table_b64=base64.b64encode(b"\xff\xfe\x00junk").decode())
    resp = client.post("/track", json=bad)
    assert resp.status_code == 400
    assert "utf-8" in resp.json()["detail"]
    short = base64.b64encode(b"0.5 0.5\n").decode()
    resp = client.post("/track", json=dict(payload, cn_table_b64=short))
    assert resp.status_code == 400


def test_eval_endpoint_scores_and_formats(client):
    gt = "10,20,30,40\n12,22,30,40\n14,24,30,40\n"
    resp = client.post("/eval", json={
        "results_text": gt, "groundtruth_text": gt, "fps": 12.5,
    })
    assert resp.status_code == 200
    data = resp.json()
    assert data["precision_at_20"] == 1.0
    assert data["auc"] == pytest.approx(20.0 / 21.0, abs=1e-12)
    assert data["summary"] == "frames=3 precision@20=1.0000 auc=0.9524 fps=12.50"
    plines = data["precision_csv"].splitlines()
    slines = data["success_csv"].splitlines()
    assert plines[0] == "threshold,value" and slines[0] == "threshold,value"
    assert len(plines) == 52 and len(slines) == 22
    assert plines[1] == "0,1"
    assert slines[-1] == "1,0"


def test_eval_without_fps_reports_na(client):
    gt = "10,20,30,40\n12,22,30,40\n"
    data = client.post("/eval", json={"results_text": gt, "groundtruth_text": gt}).json()
    assert data["summary"].endswith("fps=n/a")


def test_eval_rejects_length_mismatch(client):
    resp = client.post("/eval", json={
        "results_text": "1,1,5,5\n", "groundtruth_text": "1,1,5,5\n2,2,5,5\n",
    })
    assert resp.status_code == 400
    assert "1 boxes" in resp.json()["detail"]


def test_synth_endpoint_renders_frames(client):
    spec = drift_spec(frames=3).to_dict()
    resp = client.post("/synth", json={"spec": spec})
    assert resp.status_code == 200
    data = resp.json()
    assert data["frame_count"] == 3
    assert data["name"] == "drift"
    raw = base64.b64decode(data["frames_b64"][0])
    assert raw.startswith(b"P6")
    assert len(parse_box_text(data["groundtruth_text"], origin="gt")) == 3
    # same spec, same bytes
    again = client.post("/synth", json={"spec": spec}).json()
    assert again["frames_b64"] == data["frames_b64"]
    reseeded = client.post("/synth", json={"spec": spec, "seed": 5}).json()
    assert reseeded["frames_b64"] != data["frames_b64"]


def test_synth_rejects_bad_spec(client):
    resp = client.post("/synth", json={"spec": {"nope": 1}})
    assert resp.status_code == 400
    assert "unknown spec keys" in resp.json()["detail"]
    resp = client.post("/synth", json={"spec": {"frame_count": 1}})
    assert resp.status_code == 400


def test_selftest_endpoint(client):
    data = client.post("/selftest", json={}).json()
    assert data["all_passed"] is True
    assert len(data["checks"]) == 10
    names = [c["name"] for c in data["checks"]]
    assert len(set(names)) == 10
    assert all(c["passed"] for c in data["checks"])
    assert all(c["detail"] for c in data["checks"])


def test_session_flow_matches_batch_track(client):
    seq = generate(drift_spec(frames=4))
    frames = frames_b64(seq)
    gt0 = seq.gt[0]

    created = client.post("/sessions", json={
        "frame_b64": frames[0],
        "box": [gt0.x + 1, gt0.y + 1, gt0.w, gt0.h],
    })
    assert created.status_code == 200
    sid = created.json()["session_id"]
    assert created.json()["frame_index"] == 1
    assert created.json()["box"] == [gt0.x + 1, gt0.y + 1, gt0.w, gt0.h]

    stepped = []
    for i in range(1, 4):
        resp = client.post(f"/sessions/{sid}/frames", json={"frame_b64": frames[i]})
        assert resp.status_code == 200
        body = resp.json()
        assert body["frame_index"] == i + 1
        stepped.append(body)

    info = client.get(f"/sessions/{sid}").json()
    assert info["frame_index"] == 4
    listing = client.get("/sessions").json()["sessions"]
    assert sid in [s["session_id"] for s in listing]

    batch = client.post("/track", json={
        "frames_b64": frames,
        "groundtruth_text": format_box_text(seq.gt),
    }).json()
    for i, body in enumerate(stepped, 1):
        assert body["box"] == batch["boxes"][i]
        assert body["peak_fused"] == batch["peaks_fused"][i]
        assert body["updated"] == batch["updated"][i]

    assert client.delete(f"/sessions/{sid}").json() == {"closed": sid}
    assert client.get(f"/sessions/{sid}").status_code == 400
    assert client.delete(f"/sessions/{sid}").status_code == 400
    assert client.post(f"/sessions/{sid}/frames",
                       json={"frame_b64": frames[1]}).status_code == 400


def test_session_create_validation(client):
    seq = generate(drift_spec(frames=2))
    frames = frames_b64(seq)
    resp = client.post("/sessions", json={"frame_b64": frames[0], "box": [1, 1, 2, 2]})
    assert resp.status_code == 400  # box below the 4 px minimum
    resp = client.post("/sessions", json={"frame_b64": "@@@", "box": [1, 1, 8, 8]})
    assert resp.status_code == 400
