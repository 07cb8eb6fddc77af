"""HTTP service contract."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from patred.service import create_app


WEDGE = [[0, 1.0], [1, 0.25], [2, 0.78], [3, 0.2], [4, 0.6], [5, 0.16], [6, 0.45]]


def walk_csv_text(length=120, seed=11):
    gen = np.random.default_rng(seed)
    values = 50 + np.cumsum(gen.normal(0, 1, length))
    values -= values.min() - 1.0
    return "value\n" + "".join(f"{float(v)!r}\n" for v in values)


@pytest.fixture
def client(tmp_path):
    return TestClient(create_app(data_dir=tmp_path))


@pytest.fixture
def loaded(client):
    ds = client.post("/datasets", content=walk_csv_text()).json()["id"]
    pat = client.post("/patterns", json={"name": "wedge", "points": WEDGE}).json()["id"]
    return client, ds, pat


def test_dataset_upload_returns_preview(client):
    r = client.post("/datasets", content=walk_csv_text(), params={"name": "walk"})
    assert r.status_code == 201
    body = r.json()
    assert body["length"] == 120
    assert len(body["preview"]) == 10
    detail = client.get(f"/datasets/{body['id']}")
    assert detail.status_code == 200
    assert detail.json()["name"] == "walk"


def test_dataset_upload_rejects_bad_csv(client):
    r = client.post("/datasets", content="a,b\n1,zap\n")
    assert r.status_code == 400
    assert "zap" in r.json()["detail"]
    assert client.post("/datasets", content="").status_code == 400


def test_dataset_404(client):
    assert client.get("/datasets/99").status_code == 404


def test_pattern_create_and_reorder(client):
    r = client.post("/patterns", json={"points": WEDGE})
    assert r.status_code == 201
    assert r.json() == {"id": 1, "point_count": 7, "reordered": False}
    shuffled = [WEDGE[3], WEDGE[0], WEDGE[5], WEDGE[1]]
    r = client.post("/patterns", json={"points": shuffled})
    assert r.status_code == 201
    assert r.json()["reordered"] is True
    detail = client.get(f"/patterns/{r.json()['id']}").json()
    xs = [p[0] for p in detail["points"]]
    assert xs == sorted(xs)


def test_pattern_rejects_single_point(client):
    r = client.post("/patterns", json={"points": [[0, 1.0]]})
    assert r.status_code == 400


def test_pattern_rejects_duplicate_x(client):
    r = client.post("/patterns", json={"points": [[1, 0.5], [1, 0.7]]})
    assert r.status_code == 400


def test_search_happy_path(loaded):
    client, ds, pat = loaded
    r = client.post("/search", json={
        "pattern_id": pat, "dataset_id": ds, "metric": "nmi",
        "redundancy": {"kind": "arealine", "copies": 10},
        "window_length": 12, "top_k": 4,
    })
    assert r.status_code == 200
    body = r.json()
    assert [m["rank"] for m in body["matches"]] == [1, 2, 3, 4]
    assert all(len(m["window"]) == 12 for m in body["matches"])
    stored = client.get(f"/results/{body['result_id']}")
    assert stored.status_code == 200
    assert stored.json()["metric"] == "nmi"


def test_search_missing_resources(loaded):
    client, ds, pat = loaded
    r = client.post("/search", json={"pattern_id": 999, "dataset_id": ds,
                                     "metric": "nmi"})
    assert r.status_code == 404
    r = client.post("/search", json={"pattern_id": pat, "dataset_id": 999,
                                     "metric": "nmi"})
    assert r.status_code == 404


def test_search_capability_rationale_in_message(loaded):
    client, ds, pat = loaded
    r = client.post("/search", json={
        "pattern_id": pat, "dataset_id": ds, "metric": "pearson",
        "redundancy": {"kind": "cloud", "n_points": 3},
    })
    assert r.status_code == 422
    assert "same number of data points" in r.json()["detail"]


def test_search_unknown_metric(loaded):
    client, ds, pat = loaded
    r = client.post("/search", json={"pattern_id": pat, "dataset_id": ds,
                                     "metric": "wat"})
    assert r.status_code == 422
    assert "unknown metric" in r.json()["detail"]


def test_search_size_cap(loaded):
    client, ds, pat = loaded
    r = client.post("/search", json={"pattern_id": pat, "dataset_id": ds,
                                     "metric": "nmi", "b": 4000})
    assert r.status_code == 413


def test_mid_projection(loaded):
    client, ds, pat = loaded
    rid = client.post("/search", json={
        "pattern_id": pat, "dataset_id": ds, "metric": "nmi",
        "window_length": 12, "top_k": 3,
    }).json()["result_id"]
    r = client.get(f"/results/{rid}/mid")
    assert r.status_code == 200
    points = r.json()["points"]
    assert len(points) == 4  # reference + top_k
    assert points[0]["label"] == "P_o"
    assert points[0]["angle"] == 0.0
    assert [p["label"] for p in points[1:]] == ["rank1", "rank2", "rank3"]
    for p in points:
        assert p["x"] == pytest.approx(p["radius"] * np.cos(p["angle"]))


def test_results_404(client):
    assert client.get("/results/7").status_code == 404
    assert client.get("/results/7/mid").status_code == 404


def test_state_survives_restart(tmp_path):
    first = TestClient(create_app(data_dir=tmp_path))
    ds = first.post("/datasets", content=walk_csv_text()).json()["id"]
    first.post("/patterns", json={"points": WEDGE})

    second = TestClient(create_app(data_dir=tmp_path))
    assert second.get(f"/datasets/{ds}").status_code == 200
    assert second.get("/patterns/1").status_code == 200
    # ids keep counting rather than colliding
    again = second.post("/datasets", content=walk_csv_text(seed=3))
    assert again.json()["id"] == ds + 1


def test_cors_allows_browser_clients(client):
    r = client.options("/search", headers={
        "Origin": "http://localhost:5173",
        "Access-Control-Request-Method": "POST",
    })
    assert r.status_code == 200
    assert r.headers["access-control-allow-origin"] == "*"


def test_openapi_lists_all_endpoints(client):
    schema = client.get("/openapi.json").json()
    assert {"/datasets", "/datasets/{dataset_id}", "/patterns",
            "/patterns/{pattern_id}", "/search", "/results/{result_id}",
            "/results/{result_id}/mid"} <= set(schema["paths"])
