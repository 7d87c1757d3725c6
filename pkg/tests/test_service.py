"""HTTP endpoints: wire formats, validation codes, grouping parity, and the
push stream."""

import json
import math

import pytest
from fastapi.testclient import TestClient

from pupsemo.domain import PreferenceRanges, group_solutions
from pupsemo.optimizer import OptimizerConfig
from pupsemo.problems import builtin_problem
from pupsemo.service import create_app, num_from_wire, num_to_wire, ranges_to_wire
from pupsemo.session import RunStatus, Session

from test_session import run_initial


@pytest.fixture
def session():
    s = Session(
        builtin_problem("zdt1", n=5),
        OptimizerConfig(minpopsize=10, burstsize=10, initial_samples=50, seed=0),
        budget=100,
    )
    yield s
    s.close()


@pytest.fixture
def client(session):
    return TestClient(create_app(session))


def test_infinity_sentinels():
    assert num_to_wire(math.inf) == "inf"
    assert num_to_wire(-math.inf) == "-inf"
    assert num_to_wire(1.5) == 1.5
    assert num_from_wire("inf") == math.inf
    assert num_from_wire("-inf") == -math.inf
    assert num_from_wire(2) == 2.0


def test_state_reflects_fresh_session(client):
    doc = client.get("/state").json()
    assert doc["run_status"] == "paused"
    assert doc["eval_count"] == 0
    assert doc["evals_left"] == 100
    assert doc["ranges"]["lower"] == ["-inf", "-inf"]
    assert doc["solutions"] == []


def test_full_steering_cycle(client, session):
    assert client.post("/ranges", json={"lower": [0.0, 0.0], "upper": [0.5, 0.5]}).status_code == 200
    assert client.post("/start").json() == {"ok": True}
    run = lambda: session.snapshot().run_status  # noqa: E731
    import time
    deadline = time.monotonic() + 10
    while time.monotonic() < deadline and session.snapshot().eval_count < 50:
        time.sleep(0.01)
    client.post("/start")
    deadline = time.monotonic() + 10
    while time.monotonic() < deadline and not (
        run() is RunStatus.PAUSED and session.snapshot().eval_count >= 100
    ):
        time.sleep(0.01)
    doc = client.get("/state").json()
    assert doc["eval_count"] == 100
    assert doc["run_status"] == "paused"
    assert doc["ranges"]["upper"] == [0.5, 0.5]
    sols = client.get("/solutions", params={"history": "true"}).json()["solutions"]
    assert len(sols) == 100
    archive = client.get("/solutions").json()["solutions"]
    assert len(archive) == doc["archive_size"]


def test_ranges_validation(client):
    assert client.post("/ranges", json={"lower": [1.0, 0.0], "upper": [0.5, 1.0]}).status_code == 422
    assert client.post("/ranges", json={"lower": [0.0], "upper": [1.0]}).status_code == 422
    assert client.post("/ranges", json={"lower": [0.0, 0.0]}).status_code == 422


def test_budget_endpoint(client):
    assert client.post("/budget", json={"evals": 500}).status_code == 200
    assert client.post("/budget", json={"evals": -1}).status_code == 422
    assert client.post("/budget", json={"evals": 1.5}).status_code == 422


def test_start_on_exhausted_budget_conflict(client):
    assert client.post("/budget", json={"evals": 0}).status_code == 200
    doc = client.post("/start")
    assert doc.status_code == 409
    assert doc.json()["error"] == "exhausted"


def test_grouped_matches_library(client, session):
    run_initial(session)
    ranges = PreferenceRanges((0.3, 0.0), (0.8, 4.0))
    payload = json.dumps(ranges_to_wire(ranges))
    doc = client.get("/grouped", params={"ranges": payload, "history": "true"}).json()
    snap = session.snapshot(include_history=True)
    view = group_solutions(snap.history, ranges)
    assert [g["eval_indices"] for g in doc["groups"]] == [
        [s.eval_index for s in grp] for grp in view.groups
    ]
    for g, grp in zip(doc["groups"], view.groups):
        assert g["magnitudes"] == pytest.approx(
            [view.magnitudes[s.eval_index] for s in grp]
        )


def test_grouped_rejects_bad_ranges(client):
    assert client.get("/grouped", params={"ranges": "not json"}).status_code == 422
    bad = json.dumps({"lower": [1.0, 1.0], "upper": [0.0, 0.0]})
    assert client.get("/grouped", params={"ranges": bad}).status_code == 422


def test_event_stream_emits_snapshot_notifications(client, session):
    with client.stream("GET", "/events", params={"limit": 1}) as response:
        lines = response.iter_lines()
        for line in lines:
            if line.startswith("data:"):
                doc = json.loads(line[len("data:"):])
                assert doc["eval_count"] == 0
                assert doc["run_status"] == "paused"
                break
