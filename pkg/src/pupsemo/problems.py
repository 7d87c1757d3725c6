"""Benchmark problems, analytic-front utilities, and evaluator bindings.

Built-in problems are the bi-objective ZDT1 and ZDT3 benchmarks (Zitzler,
Deb & Thiele 2000) on [0, 1]^n with the canonical n = 30 default. External
black-box evaluators are driven over a line-delimited JSON pipe protocol:
one request line ``[x1,...,xn]`` answered by one response line
``[f1,...,fk]``.
"""

from __future__ import annotations

import json
import math
import select
import subprocess
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .domain import ContractError

DEFAULT_N = 30


class EvaluationError(RuntimeError):
    """An objective evaluation failed (bad input, bad reply, dead process)."""


def zdt1(x: Sequence[float]) -> np.ndarray:
    """ZDT1: convex Pareto front f2 = 1 - sqrt(f1), optimal at x_2..x_n = 0."""
    x = np.asarray(x, dtype=float)
    _check_unit_box(x)
    f1 = x[0]
    g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
    f2 = g * (1.0 - math.sqrt(f1 / g))
    return np.array([f1, f2])


def zdt3(x: Sequence[float]) -> np.ndarray:
    """ZDT3: disconnected Pareto front, f2 = g*(1 - sqrt(f1/g) - (f1/g)*sin(10*pi*f1))."""
    x = np.asarray(x, dtype=float)
    _check_unit_box(x)
    f1 = x[0]
    g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
    r = f1 / g
    f2 = g * (1.0 - math.sqrt(r) - r * math.sin(10.0 * math.pi * f1))
    return np.array([f1, f2])


def _check_unit_box(x: np.ndarray):
    if len(x) < 2:
        raise ContractError("ZDT problems need n >= 2")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ContractError("decision vector outside [0, 1]^n")


def zdt1_front_distance(z: Sequence[float]) -> float:
    """Euclidean distance from a bi-objective point to the analytic ZDT1 front
    {(t, 1 - sqrt(t)) : t in [0, 1]}.

    Dense sampling (10,000 points) locates the nearest segment; bounded
    scalar minimization refines to ~1e-6 accuracy.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (2,):
        raise ContractError("front distance requires k = 2")
    t = np.linspace(0.0, 1.0, 10_000)
    d2 = (t - z[0]) ** 2 + (1.0 - np.sqrt(t) - z[1]) ** 2
    i = int(np.argmin(d2))
    lo = t[max(i - 1, 0)]
    hi = t[min(i + 1, len(t) - 1)]

    def obj(s: float) -> float:
        return (s - z[0]) ** 2 + (1.0 - math.sqrt(s) - z[1]) ** 2

    best = d2[i]
    # two refinement stages: shrink the bracket around the running minimizer
    for _ in range(2):
        res = minimize_scalar(obj, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-14})
        if res.fun < best:
            best = res.fun
            width = (hi - lo) * 1e-3
            lo = max(res.x - width, 0.0)
            hi = min(res.x + width, 1.0)
    return math.sqrt(best)


_ZDT3_FRONT_CACHE: np.ndarray | None = None


def zdt3_front_points(samples: int = 20_000) -> np.ndarray:
    """Sampled approximation of ZDT3's disconnected Pareto front (g = 1 curve
    restricted to its mutually non-dominated part)."""
    global _ZDT3_FRONT_CACHE
    if _ZDT3_FRONT_CACHE is None:
        t = np.linspace(0.0, 1.0, samples)
        f2 = 1.0 - np.sqrt(t) - t * np.sin(10.0 * np.pi * t)
        pts = np.column_stack([t, f2])
        # keep only points not dominated by any other sample
        order = np.argsort(pts[:, 0])
        pts = pts[order]
        best = math.inf
        keep = []
        for i in range(len(pts) - 1, -1, -1):
            if pts[i, 1] < best:
                best = pts[i, 1]
                keep.append(i)
        _ZDT3_FRONT_CACHE = pts[keep[::-1]]
    return _ZDT3_FRONT_CACHE


def zdt3_front_distance(z: Sequence[float]) -> float:
    """Distance to the sampled ZDT3 front; accuracy limited by sampling
    density (~1e-4), used for reporting only."""
    z = np.asarray(z, dtype=float)
    if z.shape != (2,):
        raise ContractError("front distance requires k = 2")
    pts = zdt3_front_points()
    return float(np.sqrt(np.min(np.sum((pts - z) ** 2, axis=1))))


BUILTIN_EVALUATORS: dict[str, Callable[[Sequence[float]], np.ndarray]] = {
    "zdt1": zdt1,
    "zdt3": zdt3,
}

FRONT_DISTANCES: dict[str, Callable[[Sequence[float]], float]] = {
    "zdt1": zdt1_front_distance,
    "zdt3": zdt3_front_distance,
}


@dataclass
class ProblemSpec:
    """A problem definition: objective count, box bounds, objective senses,
    and the evaluator binding (built-in tag or external command line).

    Maximized objectives are sign-flipped at the evaluator boundary so the
    optimization core always minimizes.
    """

    name: str
    k: int
    n: int
    bounds: tuple[tuple[float, float], ...]
    senses: tuple[str, ...] = ()
    builtin: str | None = None
    command: tuple[str, ...] | None = None
    timeout: float = 30.0
    _external: "ExternalEvaluator | None" = field(default=None, repr=False)

    def __post_init__(self):
        if self.k < 2:
            raise ContractError("need k >= 2 objectives")
        if len(self.bounds) != self.n:
            raise ContractError("bounds length must equal n")
        for lo, hi in self.bounds:
            if lo > hi:
                raise ContractError(f"invalid bound pair ({lo}, {hi})")
        if not self.senses:
            self.senses = ("min",) * self.k
        if len(self.senses) != self.k or any(s not in ("min", "max") for s in self.senses):
            raise ContractError("senses must be k entries of 'min'/'max'")
        if (self.builtin is None) == (self.command is None):
            raise ContractError("exactly one of builtin/command must be set")
        if self.builtin is not None and self.builtin not in BUILTIN_EVALUATORS:
            raise ContractError(f"unknown builtin evaluator {self.builtin!r}")

    @property
    def lower(self) -> np.ndarray:
        return np.array([b[0] for b in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b[1] for b in self.bounds])

    def evaluate(self, x: Sequence[float]) -> np.ndarray:
        """Evaluate objectives at x, in canonical minimization sense."""
        if self.builtin is not None:
            f = np.asarray(BUILTIN_EVALUATORS[self.builtin](x), dtype=float)
        else:
            if self._external is None:
                self._external = ExternalEvaluator(self.command, timeout=self.timeout)
            f = self._external(x)
        if f.shape != (self.k,):
            raise EvaluationError(
                f"evaluator returned {f.shape[0] if f.ndim == 1 else f.shape} values, expected {self.k}"
            )
        if not np.all(np.isfinite(f)):
            raise EvaluationError(f"non-finite objective values: {f.tolist()}")
        signs = np.array([1.0 if s == "min" else -1.0 for s in self.senses])
        return f * signs

    def front_distance(self, z: Sequence[float]) -> float | None:
        """Distance to the analytic front when one is known, else None."""
        fn = FRONT_DISTANCES.get(self.builtin or "")
        return fn(z) if fn is not None else None

    def close(self):
        if self._external is not None:
            self._external.close()
            self._external = None


def builtin_problem(name: str, n: int = DEFAULT_N) -> ProblemSpec:
    """A built-in benchmark by tag ('zdt1' or 'zdt3')."""
    if name not in BUILTIN_EVALUATORS:
        raise ContractError(f"unknown builtin problem {name!r}")
    return ProblemSpec(
        name=name, k=2, n=n, bounds=((0.0, 1.0),) * n, builtin=name
    )


def load_problem(path: str) -> ProblemSpec:
    """Load a problem configuration JSON file.

    Schema: {name, k, n, bounds: [[lo, hi], ...], senses: ["min"|"max", ...],
    evaluator: {"builtin": tag} | {"command": [...]}}.
    """
    with open(path) as fh:
        doc = json.load(fh)
    evaluator = doc.get("evaluator", {})
    return ProblemSpec(
        name=doc["name"],
        k=int(doc["k"]),
        n=int(doc["n"]),
        bounds=tuple((float(lo), float(hi)) for lo, hi in doc["bounds"]),
        senses=tuple(doc.get("senses", ())),
        builtin=evaluator.get("builtin"),
        command=tuple(evaluator["command"]) if "command" in evaluator else None,
        timeout=float(doc.get("timeout", 30.0)),
    )


class ExternalEvaluator:
    """A persistent subprocess speaking the line-delimited JSON protocol.

    One request in flight at a time (the optimizer evaluates sequentially).
    Any protocol breach -- malformed reply, wrong arity, non-numeric values,
    timeout, process exit -- raises EvaluationError; evaluation timings are
    recorded for the session's average-evaluation-time statistic.
    """

    def __init__(self, command: Sequence[str], timeout: float = 30.0):
        self.command = list(command)
        self.timeout = timeout
        self.proc: subprocess.Popen | None = None
        self.last_duration = 0.0

    def _ensure_proc(self):
        if self.proc is None or self.proc.poll() is not None:
            self.proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )

    def __call__(self, x: Sequence[float]) -> np.ndarray:
        start = time.perf_counter()
        try:
            self._ensure_proc()
            request = json.dumps([float(v) for v in x]) + "\n"
            self.proc.stdin.write(request)
            self.proc.stdin.flush()
            line = self._read_line()
        except EvaluationError:
            raise
        except (OSError, ValueError, BrokenPipeError) as exc:
            raise EvaluationError(f"evaluator process failure: {exc}") from exc
        finally:
            self.last_duration = time.perf_counter() - start
        try:
            values = json.loads(line)
        except json.JSONDecodeError as exc:
            raise EvaluationError(f"malformed evaluator reply: {line!r}") from exc
        if not isinstance(values, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
        ):
            raise EvaluationError(f"non-numeric evaluator reply: {line!r}")
        return np.array(values, dtype=float)

    def _read_line(self) -> str:
        assert self.proc is not None
        ready, _, _ = select.select([self.proc.stdout], [], [], self.timeout)
        if not ready:
            raise EvaluationError(f"evaluator timed out after {self.timeout}s")
        line = self.proc.stdout.readline()
        if line == "":
            raise EvaluationError("evaluator process exited")
        return line.strip()

    def close(self):
        if self.proc is not None:
            try:
                self.proc.stdin.close()
            except OSError:
                pass
            self.proc.terminate()
            try:
                self.proc.wait(timeout=2)
            except subprocess.TimeoutExpired:
                self.proc.kill()
            self.proc = None
