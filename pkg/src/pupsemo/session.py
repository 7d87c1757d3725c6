"""Run controller mediating between the background optimizer and clients.

One session owns one optimizer run. The optimization loop runs on a
background thread and publishes immutable snapshots at step boundaries
(at least every ``burstsize`` evaluations). Control commands -- start,
stop, budget changes, preference-range injection -- are validated on the
caller's thread and consumed by the loop only at boundaries, so no step
ever observes a half-applied command.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from enum import Enum

from .domain import ContractError, PreferenceRanges, Solution
from .optimizer import Optimizer, OptimizerConfig
from .problems import ProblemSpec


class RunStatus(Enum):
    RUNNING = "running"
    PAUSED = "paused"
    STOPPED = "stopped"


class BudgetExhausted(RuntimeError):
    """Start refused: the evaluation budget is already spent."""


@dataclass(frozen=True)
class RunSnapshot:
    """Immutable published view of a run at a step boundary."""

    solutions: tuple[Solution, ...]
    ranges: PreferenceRanges
    eval_count: int
    budget: int
    evals_left: int
    avg_eval_time: float
    estimated_time_left: float
    elapsed_total: float
    run_status: RunStatus
    history: tuple[Solution, ...] | None = None


class Session:
    """Start/stop, budget management, live preference injection, and
    snapshot publication for a single optimizer run."""

    def __init__(
        self,
        problem: ProblemSpec,
        config: OptimizerConfig,
        budget: int = 0,
        ranges: PreferenceRanges | None = None,
    ):
        self.problem = problem
        self.config = config
        self.optimizer = Optimizer(problem, config, ranges)
        self._budget = budget
        self._status = RunStatus.PAUSED
        self._lock = threading.Lock()
        self._wake = threading.Condition(self._lock)
        self._published = threading.Condition()
        self._run_requested = False
        self._stop_requested = False
        self._closed = False
        self._first_pause_done = False
        self._elapsed_before = 0.0
        self._running_since: float | None = None
        self._snapshot: RunSnapshot | None = None
        self._history: tuple[Solution, ...] = ()
        self.last_error: Exception | None = None
        self._snapshot_seq = 0
        self._thread = threading.Thread(target=self._loop, daemon=True)
        self._thread.start()
        self._publish()

    # -- control surface (any thread) ------------------------------------

    def start(self):
        """Resume the background loop. Idempotent on a RUNNING session;
        refuses with BudgetExhausted when no evaluations remain."""
        with self._lock:
            if self._closed:
                raise ContractError("session is closed")
            if self._status is RunStatus.RUNNING:
                return
            if self.optimizer.eval_count >= self._budget:
                raise BudgetExhausted(
                    f"budget {self._budget} already spent ({self.optimizer.eval_count} evals)"
                )
            self._run_requested = True
            self._stop_requested = False
            self._wake.notify_all()

    def stop(self):
        """Request a pause; the current burst completes first."""
        with self._lock:
            self._stop_requested = True
            self._run_requested = False

    def set_budget(self, evals: int):
        """Raise (or set) the evaluation ceiling. On a running session the
        new value must exceed the evaluations already performed."""
        with self._lock:
            if self._status is RunStatus.RUNNING and evals <= self.optimizer.eval_count:
                raise ContractError(
                    f"budget {evals} not above current eval count {self.optimizer.eval_count}"
                )
            if evals < 0:
                raise ContractError("budget must be non-negative")
            self._budget = evals
            republish = self._status is not RunStatus.RUNNING
        if republish:
            self._publish()

    def apply_ranges(self, ranges: PreferenceRanges):
        """Inject new preference ranges; the optimizer picks them up at its
        next parent-pool build without pausing. The PreferenceRanges object
        is immutable and swapped in a single reference assignment, so no
        step can observe a half-updated range set."""
        if ranges.k != self.problem.k:
            raise ContractError("ranges arity != objective count")
        self.optimizer.apply_ranges(ranges)
        with self._lock:
            republish = self._status is not RunStatus.RUNNING
        if republish:
            self._publish()

    def snapshot(self, include_history: bool = False) -> RunSnapshot:
        """Latest published boundary state; optionally with the full
        evaluated history for all-solutions views."""
        with self._published:
            snap = self._snapshot
            history = self._history
        if include_history:
            snap = RunSnapshot(**{**snap.__dict__, "history": history})
        return snap

    def wait_for_snapshot(self, after_seq: int, timeout: float = 1.0) -> int:
        """Block until a snapshot newer than ``after_seq`` is published (or
        timeout); returns the current sequence number. Used by push streams."""
        deadline = time.monotonic() + timeout
        with self._published:
            while self._snapshot_seq <= after_seq:
                remaining = deadline - time.monotonic()
                if remaining <= 0 or self._closed:
                    break
                self._published.wait(remaining)
            return self._snapshot_seq

    def close(self):
        """Terminate the session; the loop thread exits at its next boundary."""
        with self._lock:
            self._closed = True
            self._run_requested = False
            self._wake.notify_all()
        with self._published:
            self._published.notify_all()
        self._thread.join(timeout=5)
        self.problem.close()
        self._status = RunStatus.STOPPED
        self._publish()

    # -- background loop --------------------------------------------------

    def _loop(self):
        while True:
            with self._wake:
                while not self._run_requested and not self._closed:
                    self._wake.wait()
                if self._closed:
                    return
                self._run_requested = False
                self._status = RunStatus.RUNNING
                self._running_since = time.monotonic()
            self._publish()
            try:
                self._run_until_pause()
            except Exception as exc:
                # evaluator failure: record it and stay paused
                self.last_error = exc
            self._pause()

    def _run_until_pause(self):
        opt = self.optimizer
        if not opt.all_points:
            # Step 1: initial sampling, then the mandatory first-iteration
            # pause so the DM can express preferences.
            count = min(self.config.initial_samples, self._budget)
            if count > 0:
                opt.sample_initial(count)
            self._publish()
            if not self._first_pause_done:
                self._first_pause_done = True
                return
        while True:
            with self._lock:
                if self._closed or self._stop_requested:
                    return
                remaining = self._budget - opt.eval_count
            if remaining <= 0:
                return
            opt.step(max_children=remaining)
            self._publish()

    def _pause(self):
        with self._lock:
            if not self._closed:
                self._status = RunStatus.PAUSED
            if self._running_since is not None:
                self._elapsed_before += time.monotonic() - self._running_since
                self._running_since = None
            self._stop_requested = False
        self._publish()

    def _publish(self):
        opt = self.optimizer
        evals_left = max(self._budget - opt.eval_count, 0)
        avg = opt.avg_eval_time
        running = self._status is RunStatus.RUNNING
        elapsed = self._elapsed_before
        if running and self._running_since is not None:
            elapsed += time.monotonic() - self._running_since
        snap = RunSnapshot(
            solutions=tuple(opt.archive),
            ranges=opt.ranges,
            eval_count=opt.eval_count,
            budget=self._budget,
            evals_left=evals_left,
            avg_eval_time=avg,
            estimated_time_left=evals_left * avg if running else 0.0,
            elapsed_total=elapsed,
            run_status=self._status,
        )
        with self._published:
            self._snapshot = snap
            self._history = tuple(opt.all_points)
            self._snapshot_seq += 1
            self._published.notify_all()
