"""HTTP + JSON service exposing a live optimization session.

Endpoints:
  GET  /state                      run snapshot without solution history
  GET  /solutions?history=bool     solutions as [{x, f, eval_index}]
  GET  /grouped?ranges=<json>      grouped view: eval_index arrays per group
  POST /ranges {lower, upper}      inject preference ranges (422 on invalid)
  POST /start, POST /stop          run control
  POST /budget {evals}             raise/set the evaluation budget
  GET  /events                     server-sent events, one per snapshot

All numbers are JSON doubles; +-infinity sentinels travel as the strings
"inf" / "-inf".
"""

from __future__ import annotations

import json
import math

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse, StreamingResponse

from .domain import ContractError, PreferenceRanges, group_solutions
from .session import BudgetExhausted, Session


def num_to_wire(v: float):
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return v


def num_from_wire(v) -> float:
    if isinstance(v, str):
        if v == "inf":
            return math.inf
        if v == "-inf":
            return -math.inf
        raise ContractError(f"bad numeric sentinel {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ContractError(f"not a number: {v!r}")
    return float(v)


def ranges_to_wire(ranges: PreferenceRanges) -> dict:
    return {
        "lower": [num_to_wire(v) for v in ranges.lower],
        "upper": [num_to_wire(v) for v in ranges.upper],
    }


def ranges_from_wire(doc: dict) -> PreferenceRanges:
    try:
        return PreferenceRanges(
            tuple(num_from_wire(v) for v in doc["lower"]),
            tuple(num_from_wire(v) for v in doc["upper"]),
        )
    except (KeyError, TypeError) as exc:
        raise ContractError(f"bad ranges payload: {exc}") from exc


def create_app(session: Session) -> FastAPI:
    app = FastAPI(title="pupsemo session")

    @app.get("/state")
    def state():
        snap = session.snapshot()
        return {
            "run_status": snap.run_status.value,
            "eval_count": snap.eval_count,
            "budget": snap.budget,
            "evals_left": snap.evals_left,
            "avg_eval_time": snap.avg_eval_time,
            "estimated_time_left": snap.estimated_time_left,
            "elapsed_total": snap.elapsed_total,
            "ranges": ranges_to_wire(snap.ranges),
            "archive_size": len(snap.solutions),
            "solutions": [_solution_to_wire(s) for s in snap.solutions],
        }

    @app.get("/solutions")
    def solutions(history: bool = Query(default=False)):
        snap = session.snapshot(include_history=history)
        pts = snap.history if history else snap.solutions
        return {"solutions": [_solution_to_wire(s) for s in pts]}

    @app.get("/grouped")
    def grouped(ranges: str, history: bool = Query(default=False)):
        try:
            prefs = ranges_from_wire(json.loads(ranges))
        except (json.JSONDecodeError, ContractError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        snap = session.snapshot(include_history=history)
        pts = snap.history if history else snap.solutions
        view = group_solutions(pts, prefs)
        return {
            "groups": [
                {
                    "eval_indices": [s.eval_index for s in grp],
                    "magnitudes": [view.magnitudes[s.eval_index] for s in grp],
                }
                for grp in view.groups
            ]
        }

    @app.post("/ranges")
    def post_ranges(doc: dict):
        try:
            session.apply_ranges(ranges_from_wire(doc))
        except ContractError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"ok": True}

    @app.post("/start")
    def post_start():
        try:
            session.start()
        except BudgetExhausted as exc:
            return JSONResponse(status_code=409, content={"error": "exhausted", "detail": str(exc)})
        return {"ok": True}

    @app.post("/stop")
    def post_stop():
        session.stop()
        return {"ok": True}

    @app.post("/budget")
    def post_budget(doc: dict):
        try:
            evals = doc["evals"]
            if not isinstance(evals, int) or isinstance(evals, bool):
                raise ContractError("evals must be an integer")
            session.set_budget(evals)
        except (KeyError, ContractError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"ok": True}

    @app.get("/events")
    def events(limit: int | None = Query(default=None)):
        """Snapshot-available notifications; ``limit`` closes the stream
        after that many events (debugging and tests)."""

        def stream():
            seq = 0
            sent = 0
            while limit is None or sent < limit:
                new_seq = session.wait_for_snapshot(seq, timeout=1.0)
                snap = session.snapshot()
                if new_seq > seq:
                    seq = new_seq
                    sent += 1
                    payload = json.dumps(
                        {"eval_count": snap.eval_count, "run_status": snap.run_status.value}
                    )
                    yield f"data: {payload}\n\n"
                else:
                    yield ": keepalive\n\n"
                if snap.run_status.value == "stopped":
                    return

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app


def _solution_to_wire(s) -> dict:
    return {"x": list(s.x), "f": list(s.f), "eval_index": s.eval_index}
