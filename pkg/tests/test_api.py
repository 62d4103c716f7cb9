import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert "version" in response.json()


def test_equal_on_surface(client):
    payload = {"group": {"genus": 3}, "u": "abAB", "v": "CC"}
    response = client.post("/groups/equal", json=payload)
    assert response.status_code == 200
    assert response.json()["verdict"] == "equal"


def test_equal_rejects_unknown_strategy(client):
    response = client.post("/groups/equal", json={"u": "a", "v": "a", "strategy": "guess"})
    assert response.status_code == 422


def test_equal_rejects_bad_letters(client):
    response = client.post("/groups/equal", json={"u": "a1", "v": "a"})
    assert response.status_code == 400


def test_stallings(client):
    response = client.post("/groups/stallings", json={"generators": ["aa", "ab", "aB"], "word": "ba"})
    assert response.status_code == 200
    data = response.json()
    assert data["contains"] is True
    assert data["automaton"]["generators"] == ["aa", "ab", "aB"]


def test_malnormal(client):
    response = client.post("/groups/malnormal", json={"generators": ["aa", "ab", "aB"], "radius": 1, "cap": 2})
    assert response.status_code == 200
    assert response.json()["violations"]


def test_dhat_free_factor(client):
    response = client.post("/coned/dhat", json={"setting": "f2-in-f4", "radius": 2, "h": "ab"})
    assert response.status_code == 200
    data = response.json()
    assert data["value"] is None
    assert data["status"] == "infinite_within_ball"


def test_dhat_outside_ball(client):
    response = client.post("/coned/dhat", json={"setting": "f2-in-f4", "radius": 2, "h": "aaa"})
    assert response.status_code == 404


def test_dhat_errors(client):
    assert client.post("/coned/dhat", json={"setting": "f2-in-f4", "radius": 2, "h": "c"}).status_code == 400
    assert client.post("/coned/dhat", json={"setting": "torus", "h": "a"}).status_code == 400


def test_dhat_ball(client):
    response = client.post("/coned/dhat-ball", json={"setting": "f2-in-f4", "radius": 2, "r": 3})
    assert response.status_code == 200
    assert response.json()["elements"] == [""]


def test_cache_reuses_graphs(client):
    client.post("/coned/dhat-ball", json={"setting": "f2-in-f4", "radius": 2, "r": 1})
    data = client.get("/coned/cache").json()
    assert 1 <= data["cached"] <= data["capacity"]


def test_brooks(client):
    response = client.post("/quasi/brooks", json={"pattern": "ab", "word": "ba", "homogenize": 3})
    assert response.status_code == 200
    assert response.json() == {"value": 0, "homogenized": "2/3"}


def test_defect(client):
    payload = {"pattern": "a", "max_length": 2, "exhaustive": True}
    response = client.post("/quasi/defect", json=payload)
    assert response.status_code == 200
    assert response.json()["value"] == "0"


def test_list_cases(client):
    response = client.get("/cases")
    assert response.status_code == 200
    assert "ggh-suite" in response.json()["cases"]


def test_run_case(client):
    response = client.post("/cases/run", json={"case": "word-problem", "overrides": {"max_length": 2}})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert data["case"] == "word-problem"


def test_run_case_errors(client):
    assert client.post("/cases/run", json={"case": "nope"}).status_code == 422
    assert client.post("/cases/run", json={"case": "brooks-suite"}).status_code == 400
