"""Dominance relations, non-dominated filtering, and preference-range queries.

All objectives are handled in canonical minimization sense; sense flipping
for maximized objectives happens at the evaluator boundary (see problems.py).
Everything here is a pure function over immutable inputs and is safe to call
from any thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np


class Relation(Enum):
    """Outcome of a pairwise dominance comparison."""

    A_DOMINATES_B = "a_dominates_b"
    B_DOMINATES_A = "b_dominates_a"
    INCOMPARABLE = "incomparable"
    EQUAL = "equal"


class ContractError(ValueError):
    """Raised when an input violates a documented precondition."""


@dataclass(frozen=True)
class Solution:
    """A decision vector paired with its objective vector.

    ``eval_index`` is the order of evaluation and is unique within a run;
    it doubles as a deterministic tie-breaker in orderings.
    """

    x: tuple[float, ...]
    f: tuple[float, ...]
    eval_index: int

    def __post_init__(self):
        if any(not math.isfinite(v) for v in self.f):
            raise ContractError(f"non-finite objective value in {self.f}")
        if self.eval_index < 0:
            raise ContractError("eval_index must be non-negative")


@dataclass(frozen=True)
class PreferenceRanges:
    """Per-objective acceptable [lower, upper] bounds.

    An absent preference for objective i is the unbounded interval
    (-inf, +inf), which contributes zero violation.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ContractError("lower/upper length mismatch")
        for lo, hi in zip(self.lower, self.upper):
            if math.isnan(lo) or math.isnan(hi):
                raise ContractError("NaN bound in preference ranges")
            if lo > hi:
                raise ContractError(f"lower bound {lo} exceeds upper bound {hi}")

    @property
    def k(self) -> int:
        return len(self.lower)

    @classmethod
    def unbounded(cls, k: int) -> "PreferenceRanges":
        return cls((-math.inf,) * k, (math.inf,) * k)

    def is_unbounded(self) -> bool:
        return all(lo == -math.inf for lo in self.lower) and all(
            hi == math.inf for hi in self.upper
        )


@dataclass(frozen=True)
class ViolationReport:
    """How far an objective vector falls outside a set of preference ranges."""

    per_objective: tuple[float, ...]
    violated_count: int
    total_magnitude: float

    def is_inside(self) -> bool:
        return self.violated_count == 0


@dataclass(frozen=True)
class GroupedView:
    """Solutions partitioned by number of violated limits.

    ``groups[0]`` passes all limits; ``groups[m]`` violates exactly m of
    them. Within each group solutions are ordered ascending by total
    violation magnitude, ties broken by eval_index.
    """

    groups: tuple[tuple[Solution, ...], ...]
    magnitudes: dict[int, float] = field(default_factory=dict, compare=False)


def dominates(a: Sequence[float], b: Sequence[float]) -> Relation:
    """Pairwise Pareto dominance between two objective vectors (minimization).

    A dominates B iff every component of A is <= the matching component of B
    and at least one is strictly smaller.
    """
    if len(a) != len(b):
        raise ContractError(f"objective length mismatch: {len(a)} vs {len(b)}")
    a_lt = b_lt = False
    equal = True
    a_ge = True
    a_le_all = True
    for ai, bi in zip(a, b):
        if ai < bi:
            a_lt = True
            a_ge = False
            equal = False
        elif ai > bi:
            b_lt = True
            a_le_all = False
            equal = False
    if equal:
        return Relation.EQUAL
    if a_le_all and a_lt:
        return Relation.A_DOMINATES_B
    if a_ge and b_lt:
        return Relation.B_DOMINATES_A
    return Relation.INCOMPARABLE


def _dominated_by_row(objs: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Boolean mask of rows in ``objs`` strictly dominated by vector ``f``."""
    return (f <= objs).all(axis=1) & (f < objs).any(axis=1)


def _rows_dominating(objs: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Boolean mask of rows in ``objs`` that strictly dominate vector ``f``."""
    return (objs <= f).all(axis=1) & (objs < f).any(axis=1)


def nondominated_filter(solutions: Iterable[Solution]) -> list[Solution]:
    """Return the solutions not dominated by any other input solution.

    Componentwise-equal objective vectors do not dominate each other, so
    duplicates in objective space are all retained. Input order is preserved
    in the output. Uses incremental insert-and-evict, one vectorized
    comparison per candidate.
    """
    items = list(solutions)
    if not items:
        return []
    kept: list[int] = []
    objs = np.array([s.f for s in items], dtype=float)
    front = np.empty((0, objs.shape[1]))
    for i, f in enumerate(objs):
        if kept and _rows_dominating(front, f).any():
            continue
        if kept:
            alive = ~_dominated_by_row(front, f)
            if not alive.all():
                kept = [k for k, a in zip(kept, alive) if a]
                front = front[alive]
        kept.append(i)
        front = np.vstack([front, f])
    return [items[i] for i in kept]


def nondominated_fronts(
    solutions: Iterable[Solution], needed: int
) -> list[list[Solution]]:
    """Peel successive non-dominated layers until ``needed`` solutions are
    accumulated or the input is exhausted."""
    if needed < 1:
        raise ContractError("needed must be >= 1")
    remaining = list(solutions)
    fronts: list[list[Solution]] = []
    total = 0
    while remaining and total < needed:
        front = nondominated_filter(remaining)
        fronts.append(front)
        total += len(front)
        in_front = {id(s) for s in front}
        remaining = [s for s in remaining if id(s) not in in_front]
    return fronts


def violation(objectives: Sequence[float], ranges: PreferenceRanges) -> ViolationReport:
    """Measure how far an objective vector lies outside the given ranges.

    Per objective the violation is the absolute excess beyond the interval;
    magnitudes are summed over objectives with no cross-objective
    normalization.
    """
    if len(objectives) != ranges.k:
        raise ContractError(
            f"objective length {len(objectives)} != range count {ranges.k}"
        )
    per = []
    for z, lo, hi in zip(objectives, ranges.lower, ranges.upper):
        below = lo - z
        above = z - hi
        v = 0.0
        if below > 0:
            v += below
        if above > 0:
            v += above
        per.append(v)
    count = sum(1 for v in per if v > 0)
    return ViolationReport(tuple(per), count, float(sum(per)))


def group_solutions(
    solutions: Iterable[Solution], ranges: PreferenceRanges
) -> GroupedView:
    """Partition solutions by how many preference limits they violate.

    Group 0 passes all limits, group m fails exactly m of them; within each
    group the ordering is ascending total violation magnitude with
    eval_index as the deterministic tie-break.
    """
    k = ranges.k
    buckets: list[list[tuple[float, int, Solution]]] = [[] for _ in range(k + 1)]
    magnitudes: dict[int, float] = {}
    for s in solutions:
        rep = violation(s.f, ranges)
        buckets[rep.violated_count].append((rep.total_magnitude, s.eval_index, s))
        magnitudes[s.eval_index] = rep.total_magnitude
    groups = []
    for bucket in buckets:
        bucket.sort(key=lambda t: (t[0], t[1]))
        groups.append(tuple(s for _, _, s in bucket))
    return GroupedView(tuple(groups), magnitudes)
