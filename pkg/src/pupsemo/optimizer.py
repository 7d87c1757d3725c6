"""The PUPS-EMO main loop as an explicitly steppable state machine.

The archive has no size cap: it always holds every non-dominated solution
evaluated so far, so it never oscillates or deteriorates. Each step rebuilds
the preferred parent pool from the current preference ranges, generates a
burst of DE/rand/1 children, evaluates them, and folds them into the history
and archive. With unbounded ranges (or ``use_preferences=False``) the loop
reduces exactly to the original unrestricted-population algorithm.

The state is single-writer: one execution context steps the optimizer at a
time, and observers only ever see immutable snapshots taken at step
boundaries.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .domain import (
    ContractError,
    PreferenceRanges,
    Solution,
    _dominated_by_row,
    _rows_dominating,
    nondominated_fronts,
    violation,
)
from .problems import ProblemSpec


@dataclass(frozen=True)
class DEParams:
    """Differential-evolution operator parameters (DE/rand/1 strategy)."""

    F: float = 0.8
    CR: float = 0.5

    def __post_init__(self):
        if self.F <= 0:
            raise ContractError("F must be positive")
        if not 0.0 <= self.CR <= 1.0:
            raise ContractError("CR must lie in [0, 1]")


@dataclass(frozen=True)
class OptimizerConfig:
    minpopsize: int = 10
    burstsize: int = 10
    initial_samples: int = 100
    de: DEParams = field(default_factory=DEParams)
    seed: int = 0
    # False = original unrestricted-population loop with no preference
    # filtering; parents come straight from the (backfilled) population.
    use_preferences: bool = True

    def __post_init__(self):
        if self.minpopsize < 4:
            raise ContractError("minpopsize must be >= 4 for DE/rand/1")
        if self.burstsize < 1:
            raise ContractError("burstsize must be >= 1")
        if self.initial_samples < self.minpopsize:
            raise ContractError("initial_samples must be >= minpopsize")


def latin_hypercube(
    bounds: tuple[tuple[float, float], ...], count: int, rng: np.random.Generator
) -> np.ndarray:
    """Latin-hypercube sample: each dimension split into ``count`` equal
    strata, one draw per stratum, strata permuted independently per
    dimension. Degenerate dimensions (lower == upper) stay fixed."""
    if count < 1:
        raise ContractError("count must be >= 1")
    n = len(bounds)
    out = np.empty((count, n))
    for d, (lo, hi) in enumerate(bounds):
        perm = rng.permutation(count)
        u = rng.random(count)
        out[:, d] = lo + (perm + u) / count * (hi - lo)
    return out


def de_rand_1(
    parent_idx: int,
    pool: np.ndarray,
    de: DEParams,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """One DE/rand/1 trial vector with binomial crossover and box clamping.

    Donors r1, r2, r3 are drawn from the pool without replacement and
    distinct from the parent; if the pool has fewer than 4 members the
    parent exclusion is relaxed first. j_rand forces at least one mutant
    coordinate into the trial; out-of-box coordinates are truncated to the
    border.
    """
    m = len(pool)
    candidates = np.delete(np.arange(m), parent_idx) if m >= 4 else np.arange(m)
    replace = len(candidates) < 3
    r1, r2, r3 = rng.choice(candidates, size=3, replace=replace)
    mutant = pool[r1] + de.F * (pool[r2] - pool[r3])
    n = pool.shape[1]
    j_rand = rng.integers(n)
    cross = rng.random(n) < de.CR
    cross[j_rand] = True
    trial = np.where(cross, mutant, pool[parent_idx])
    return np.clip(trial, lower, upper)


class Optimizer:
    """Owns the evaluated history, the unrestricted non-dominated archive,
    the preferred parent pool, and the deterministic RNG state."""

    def __init__(
        self,
        problem: ProblemSpec,
        config: OptimizerConfig,
        ranges: PreferenceRanges | None = None,
    ):
        self.problem = problem
        self.config = config
        self.ranges = ranges if ranges is not None else PreferenceRanges.unbounded(problem.k)
        if self.ranges.k != problem.k:
            raise ContractError("preference ranges arity != objective count")
        self.rng = np.random.default_rng(config.seed)
        self.all_points: list[Solution] = []
        self.archive: list[Solution] = []
        self._archive_f = np.empty((0, problem.k))
        self._seen: set[tuple[float, ...]] = set()
        self.eval_count = 0
        self.total_eval_time = 0.0
        # (eval_count at boundary, ranges in force) recorded at every
        # parent-pool build; instruments the range-injection boundary.
        self.range_log: list[tuple[int, PreferenceRanges]] = []

    # -- evaluation ----------------------------------------------------

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        start = time.perf_counter()
        try:
            return self.problem.evaluate(x)
        finally:
            self.total_eval_time += time.perf_counter() - start

    def _admit(self, key: tuple[float, ...], f: np.ndarray) -> Solution:
        """Record an evaluated point in history and archive."""
        self._seen.add(key)
        sol = Solution(key, tuple(float(v) for v in f), self.eval_count)
        self.eval_count += 1
        self.all_points.append(sol)
        self._archive_insert(sol)
        return sol

    def _archive_insert(self, sol: Solution):
        f = np.asarray(sol.f)
        if len(self.archive):
            if _rows_dominating(self._archive_f, f).any():
                return
            alive = ~_dominated_by_row(self._archive_f, f)
            if not alive.all():
                self.archive = [s for s, a in zip(self.archive, alive) if a]
                self._archive_f = self._archive_f[alive]
        self.archive.append(sol)
        self._archive_f = np.vstack([self._archive_f, f])

    # -- algorithm steps -----------------------------------------------

    def sample_initial(self, count: int | None = None) -> int:
        """Initial space-filling sampling; returns evaluations performed."""
        if self.all_points:
            raise ContractError("initial sampling already done")
        count = self.config.initial_samples if count is None else count
        points = latin_hypercube(self.problem.bounds, count, self.rng)
        fresh = self._distinct(points)
        results = [(key, self._evaluate(x)) for key, x in fresh]
        for key, f in results:
            self._admit(key, f)
        return len(results)

    def _distinct(self, points) -> list[tuple[tuple[float, ...], np.ndarray]]:
        """Drop decision vectors already evaluated (defensive dedup guard;
        the continuous generator makes collisions vanishingly rare)."""
        fresh = []
        batch: set[tuple[float, ...]] = set()
        for x in points:
            key = tuple(float(v) for v in x)
            if key in self._seen or key in batch:
                continue
            batch.add(key)
            fresh.append((key, x))
        return fresh

    def build_pref_pop(self) -> list[Solution]:
        """Construct the parent pool for the next burst.

        The population is the archive, backfilled with successive dominated
        fronts from the history when below minpopsize. With preferences
        active, solutions inside the ranges form the pool; if too few, the
        least-violating remainder is appended until minpopsize is reached.
        """
        cfg = self.config
        pop = list(self.archive)
        if len(pop) < cfg.minpopsize:
            in_pop = {s.eval_index for s in pop}
            rest = [s for s in self.all_points if s.eval_index not in in_pop]
            for front in nondominated_fronts(rest, cfg.minpopsize - len(pop)) if rest else []:
                pop.extend(sorted(front, key=lambda s: s.eval_index))
                if len(pop) >= cfg.minpopsize:
                    break
        self.range_log.append((self.eval_count, self.ranges))
        if not cfg.use_preferences:
            return pop
        scored = [(violation(s.f, self.ranges).total_magnitude, s.eval_index, s) for s in pop]
        pool = [s for mag, _, s in scored if mag == 0.0]
        if len(pool) < cfg.minpopsize:
            outside = sorted((t for t in scored if t[0] > 0.0), key=lambda t: (t[0], t[1]))
            for _, _, s in outside:
                if len(pool) >= cfg.minpopsize:
                    break
                pool.append(s)
        return pool

    def select_parents(self, pool: list[Solution], burst: int) -> list[int]:
        """Uniform parent draw: without replacement when the pool is large
        enough, with replacement otherwise."""
        if not pool:
            raise ContractError("empty parent pool")
        if len(pool) >= burst:
            return list(self.rng.choice(len(pool), size=burst, replace=False))
        return list(self.rng.integers(0, len(pool), size=burst))

    def step(self, max_children: int | None = None) -> int:
        """One full pass: rebuild the parent pool, generate and evaluate a
        burst of children, fold them into history and archive.

        Returns the number of evaluator calls made. On evaluator failure the
        state (history, archive, counters, RNG) is left unchanged and the
        error propagates.
        """
        if not self.all_points:
            raise ContractError("step before initial sampling")
        burst = self.config.burstsize
        if max_children is not None:
            burst = min(burst, max_children)
        if burst <= 0:
            return 0
        rng_state = self.rng.bit_generator.state
        pool = self.build_pref_pop()
        try:
            parent_ids = self.select_parents(pool, burst)
            pool_x = np.array([s.x for s in pool])
            lower, upper = self.problem.lower, self.problem.upper
            trials = [
                de_rand_1(pid, pool_x, self.config.de, lower, upper, self.rng)
                for pid in parent_ids
            ]
            fresh = self._distinct(trials)
            results = [(key, self._evaluate(x)) for key, x in fresh]
        except Exception:
            self.rng.bit_generator.state = rng_state
            self.range_log.pop()
            raise
        for key, f in results:
            self._admit(key, f)
        return len(results)

    def apply_ranges(self, ranges: PreferenceRanges):
        """Atomically replace the preference ranges; takes effect at the
        next parent-pool build, never mid-step."""
        if ranges.k != self.problem.k:
            raise ContractError("preference ranges arity != objective count")
        self.ranges = ranges

    @property
    def avg_eval_time(self) -> float:
        return self.total_eval_time / self.eval_count if self.eval_count else 0.0
