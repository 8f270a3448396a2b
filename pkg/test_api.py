import pytest
from fastapi.testclient import TestClient

from api.main import VERSION, app
from config import Config


@pytest.fixture
def client():
    with TestClient(app) as client:
        yield client


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["version"] == VERSION


def test_health_reports_budgets(client):
    data = client.get("/health").json()
    assert data["status"] == "healthy"
    assert data["budgets"]["brute_force"] == Config.BRUTE_FORCE_BUDGET
    assert data["budgets"]["universe"] == Config.UNIVERSE_BUDGET


def test_bounds(client):
    response = client.get("/bounds", params={"m": 3, "k": 2, "t": 1})
    assert response.status_code == 200
    records = {r["formula"]: r for r in response.json()}
    assert records["sum"]["value"] == 6
    assert records["set_sum"]["n"] == 4


def test_bounds_reject_t_above_k(client):
    assert client.get("/bounds", params={"m": 3, "k": 2, "t": 3}).status_code == 400


def test_search_sum(client):
    response = client.post("/search", json={"m": 4, "k": 3, "t": 2})
    assert response.status_code == 200
    payload = response.json()
    assert payload["optimum"] == 11
    assert payload["verdict"]["status"] == "match"
    assert set(payload["classes"][0]) == {"F", "G"}


def test_search_t_intersecting(client):
    response = client.post("/search", json={"m": 4, "k": 2, "t": 1, "objective": "t_intersecting"})
    assert response.status_code == 200
    assert response.json()["optimum"] == 4


def test_search_errors(client):
    assert client.post("/search", json={"m": 3, "k": 2, "t": 1, "objective": "other"}).status_code == 400
    assert client.post("/search", json={"m": 3, "k": 2, "t": 1, "engine": "quantum"}).status_code == 400
    assert client.post("/search", json={"m": 5, "k": 3, "t": 1, "engine": "brute"}).status_code == 413


def test_compress(client):
    body = {"m": 4, "t": 2, "first": [[1, 1, 2]], "second": [[1, 1, 2], [1, 2, 3]]}
    response = client.post("/compress", json=body)
    assert response.status_code == 200
    payload = response.json()
    assert payload["final_kernel"] == [1, 1, 1, 1]
    assert len(payload["second"]) == 2


def test_compress_non_intersecting_pair_conflicts(client):
    body = {"m": 4, "t": 1, "first": [[1, 2, 3]], "second": [[4, 4, 4]]}
    assert client.post("/compress", json=body).status_code == 409


def test_compress_bad_family(client):
    body = {"m": 3, "t": 1, "first": [[1, 5]], "second": [[1, 2]]}
    assert client.post("/compress", json=body).status_code == 400


def test_compress_t_above_k(client):
    body = {"m": 4, "t": 4, "first": [[1, 1, 2]], "second": [[1, 1, 2]]}
    assert client.post("/compress", json=body).status_code == 400


def test_compress_universe_budget(client):
    body = {"m": 40, "t": 1, "first": [[1, 2, 3, 4, 5]], "second": [[1, 2, 3, 4, 40]]}
    assert client.post("/compress", json=body).status_code == 413


def test_bijection(client):
    response = client.get("/bijection", params={"m": 3, "k": 2})
    assert response.status_code == 200
    rows = response.json()
    assert len(rows) == 6
    assert {"subset": "{1,4}", "multiset": "[1,1]"} in rows
    assert client.get("/bijection", params={"m": 0, "k": 2}).status_code == 422


def test_kernels_verify(client):
    response = client.post("/kernels/verify", json={"m": 4, "k": 3, "t": 2, "samples": 5, "seed": 1})
    assert response.status_code == 200
    payload = response.json()
    assert payload["passes"] == 5
    assert payload["hm_identity"] is True


def test_kernels_verify_precondition(client):
    response = client.post("/kernels/verify", json={"m": 3, "k": 3, "t": 1, "samples": 5})
    assert response.status_code == 409
