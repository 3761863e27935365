import json

import pytest
from fastapi.testclient import TestClient

from faultflow import jsonio
from faultflow.service import create_app


@pytest.fixture(scope="module")
def client(comd_workspace):
    app = create_app(comd_workspace.version_dir.parent)
    with TestClient(app) as c:
        yield c


def canonical(response) -> bytes:
    return jsonio.canonical_bytes(json.loads(response.content))


def test_runs_endpoint_streams_persisted_index(client, comd_workspace):
    resp = client.get("/api/runs")
    assert resp.status_code == 200
    assert resp.content == comd_workspace.runs_index_bytes()
    ids = [r["run_id"] for r in resp.json()]
    assert ids == ["golden", "fault_0001"]


def test_functions_endpoint_matches_persisted_statuses(client, comd_workspace):
    resp = client.get("/api/runs/fault_0001/functions")
    assert resp.status_code == 200
    assert resp.content == comd_workspace.statuses_bytes("fault_0001")
    statuses = resp.json()
    assert len(statuses) == 157
    assert sum(1 for s in statuses if s["status"] == "differ") == 64
    assert sum(1 for s in statuses if s["is_injection_site"]) == 1


def test_functions_endpoint_for_golden_run(client):
    statuses = client.get("/api/runs/golden/functions").json()
    assert len(statuses) == 157
    assert all(s["status"] == "match" for s in statuses)


def test_graph_endpoint_equals_persisted_projection(client, comd_workspace):
    resp = client.get("/api/runs/fault_0001/functions/42/graph", params={"threshold": 350})
    assert resp.status_code == 200
    expected = jsonio.canonical_bytes(comd_workspace.styled_json("fault_0001", 42, 350, "diff"))
    assert canonical(resp) == expected
    red = [e for e in resp.json()["edges"] if e["style"] == "red"]
    assert len(red) == 1
    assert (red[0]["from"], red[0]["to"], red[0]["weight"]) == ("0x408000", "0x408030", 351)


def test_graph_endpoint_defaults(client):
    faulty = client.get("/api/runs/fault_0001/functions/42/graph").json()
    assert faulty["view"] == "diff" and faulty["threshold"] == 0
    golden = client.get("/api/runs/golden/functions/42/graph").json()
    assert golden["view"] == "global"


def test_global_view_on_faulty_run_serves_golden_lsg(client, comd_workspace):
    resp = client.get("/api/runs/fault_0001/functions/42/graph", params={"view": "global"})
    data = resp.json()
    edges = {(e["from"], e["to"]): e["weight"] for e in data["edges"]}
    assert edges[("0x408000", "0x408030")] == 400


def test_diff_view_on_golden_run_is_bad_request(client):
    resp = client.get("/api/runs/golden/functions/42/graph", params={"view": "diff"})
    assert resp.status_code == 400
    body = resp.json()
    assert body["code"] == "bad_request" and "message" in body


def test_unknown_run_and_function_are_not_found(client):
    resp = client.get("/api/runs/nope/functions")
    assert resp.status_code == 404
    assert resp.json()["code"] == "not_found"
    resp = client.get("/api/runs/fault_0001/functions/9999/graph")
    assert resp.status_code == 404
    assert resp.json()["code"] == "not_found"
    resp = client.get("/api/runs/ghost/functions/42/graph", params={"view": "global"})
    assert resp.status_code == 404
    assert resp.json()["code"] == "not_found"


def test_threshold_validation(client):
    resp = client.get("/api/runs/fault_0001/functions/42/graph", params={"threshold": -1})
    assert resp.status_code == 422
    assert resp.json()["code"] == "validation_error"


def test_cvg_endpoint(client, comd_workspace):
    resp = client.get("/api/campaign/cvg/42", params={"threshold": 0})
    assert resp.status_code == 200
    assert canonical(resp) == jsonio.canonical_bytes(comd_workspace.styled_cvg_json(42, 0))
    data = resp.json()
    assert data["view"] == "cvg"
    weights = {(e["from"], e["to"]): e["weight"] for e in data["edges"]}
    assert weights[("0x408000", "0x408030")] == 351


def test_ranking_endpoint_slices_persisted_ranking(client, comd_workspace):
    full = json.loads(comd_workspace.ranking_bytes())
    resp = client.get("/api/campaign/ranking", params={"top": 5})
    assert canonical(resp) == jsonio.canonical_bytes(full[:5])
    top = resp.json()
    assert top[0]["function_name"] == "setVcm_omp_fn.o"
    assert top[0]["from"] == "0x408000" and top[0]["to"] == "0x408030"


def test_repeated_gets_are_identical(client):
    for url, params in [
        ("/api/runs", {}),
        ("/api/runs/fault_0001/functions", {}),
        ("/api/runs/fault_0001/functions/42/graph", {"threshold": 17}),
        ("/api/campaign/cvg/42", {}),
        ("/api/campaign/ranking", {"top": 3}),
    ]:
        a = client.get(url, params=params)
        b = client.get(url, params=params)
        assert a.content == b.content


def test_frontend_mounted_when_dir_provided(tmp_path, comd_workspace):
    dist = tmp_path / "dist"
    dist.mkdir()
    (dist / "index.html").write_text("<html><body>explorer</body></html>")
    app = create_app(comd_workspace.version_dir.parent, frontend_dir=dist)
    with TestClient(app) as c:
        resp = c.get("/")
        assert resp.status_code == 200
        assert "explorer" in resp.text
        assert c.get("/api/runs").status_code == 200
