"""Headless batch experiments: scripted preference schedules and paired
UPS-vs-PUPS comparisons.

A RunScript stands in for the human decision maker: each phase applies a
set of preference ranges and then spends an evaluation budget increment.
Runs are deterministic per seed, so a (seed, config, script) triple always
reproduces the same evaluated-point sequence.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

from .domain import ContractError, PreferenceRanges, group_solutions, violation
from .optimizer import Optimizer, OptimizerConfig
from .problems import ProblemSpec


@dataclass(frozen=True)
class Phase:
    budget_increment: int
    ranges: PreferenceRanges

    def __post_init__(self):
        if self.budget_increment <= 0:
            raise ContractError("phase budget increment must be positive")


@dataclass(frozen=True)
class RunScript:
    phases: tuple[Phase, ...]

    def __post_init__(self):
        if not self.phases:
            raise ContractError("script needs at least one phase")

    @classmethod
    def single(cls, evals: int, ranges: PreferenceRanges) -> "RunScript":
        return cls((Phase(evals, ranges),))

    @classmethod
    def from_json(cls, doc: dict, k: int) -> "RunScript":
        phases = []
        for p in doc["phases"]:
            r = p.get("ranges")
            if r is None:
                ranges = PreferenceRanges.unbounded(k)
            else:
                ranges = PreferenceRanges(
                    tuple(_num(v) for v in r["lower"]),
                    tuple(_num(v) for v in r["upper"]),
                )
            phases.append(Phase(int(p["evals"]), ranges))
        return cls(tuple(phases))


def _num(v) -> float:
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return float(v)


@dataclass
class PhaseReport:
    """Archive metrics at the end of one script phase, measured against that
    phase's preference ranges."""

    evals: int
    group_sizes: list[int]
    in_box_count: int
    in_box_fraction: float
    min_violation: float
    mean_front_distance: float | None
    min_front_distance: float | None
    wall_time: float


@dataclass
class RunReport:
    problem: str
    seed: int
    use_preferences: bool
    phases: list[PhaseReport] = field(default_factory=list)
    total_evals: int = 0
    archive_size: int = 0
    wall_time: float = 0.0

    def to_json_obj(self) -> dict:
        return {
            "problem": self.problem,
            "seed": self.seed,
            "use_preferences": self.use_preferences,
            "total_evals": self.total_evals,
            "archive_size": self.archive_size,
            "wall_time": self.wall_time,
            "phases": [vars(p) for p in self.phases],
        }


def phase_metrics(
    optimizer: Optimizer, ranges: PreferenceRanges, wall_time: float
) -> PhaseReport:
    archive = optimizer.archive
    view = group_solutions(archive, ranges)
    in_box = view.groups[0]
    mags = [violation(s.f, ranges).total_magnitude for s in archive]
    dists = None
    if optimizer.problem.front_distance((0.0, 1.0)) is not None:
        dists = [optimizer.problem.front_distance(s.f) for s in in_box]
    return PhaseReport(
        evals=optimizer.eval_count,
        group_sizes=[len(g) for g in view.groups],
        in_box_count=len(in_box),
        in_box_fraction=len(in_box) / len(archive) if archive else 0.0,
        min_violation=min(mags) if mags else math.inf,
        mean_front_distance=(sum(dists) / len(dists)) if dists else None,
        min_front_distance=min(dists) if dists else None,
        wall_time=wall_time,
    )


def run_batch(
    problem: ProblemSpec,
    config: OptimizerConfig,
    script: RunScript,
    on_boundary=None,
) -> tuple[Optimizer, RunReport]:
    """Execute the script phases sequentially on a fresh optimizer.

    Budget increments are cumulative evaluator-call counts; the initial
    sampling (capped at the first phase budget) counts against them.
    ``on_boundary(optimizer)`` is invoked after every step for replay-style
    instrumentation.
    """
    opt = Optimizer(problem, config)
    report = RunReport(problem.name, config.seed, config.use_preferences)
    start = time.perf_counter()
    target = 0
    for phase in script.phases:
        phase_start = time.perf_counter()
        target += phase.budget_increment
        opt.apply_ranges(phase.ranges)
        if not opt.all_points:
            opt.sample_initial(min(config.initial_samples, target))
            if on_boundary is not None:
                on_boundary(opt)
        while opt.eval_count < target:
            made = opt.step(max_children=target - opt.eval_count)
            if on_boundary is not None:
                on_boundary(opt)
            if made == 0:
                break
        report.phases.append(
            phase_metrics(opt, phase.ranges, time.perf_counter() - phase_start)
        )
    report.total_evals = opt.eval_count
    report.archive_size = len(opt.archive)
    report.wall_time = time.perf_counter() - start
    return opt, report


@dataclass
class SeedComparison:
    seed: int
    pups_in_box: int
    ups_in_box: int
    pups_mean_front_distance: float | None
    ups_mean_front_distance: float | None

    @property
    def pups_wins_count(self) -> bool:
        return self.pups_in_box > self.ups_in_box

    @property
    def pups_wins_distance(self) -> bool:
        # an arm with no in-box solutions counts as infinitely far away
        p = self.pups_mean_front_distance
        u = self.ups_mean_front_distance
        if p is None and u is None:
            return False
        if u is None:
            return True
        if p is None:
            return False
        return p < u


@dataclass
class CompareReport:
    problem: str
    evals: int
    ranges: PreferenceRanges
    per_seed: list[SeedComparison]

    @property
    def count_win_rate(self) -> float:
        return sum(c.pups_wins_count for c in self.per_seed) / len(self.per_seed)

    @property
    def distance_win_rate(self) -> float:
        return sum(c.pups_wins_distance for c in self.per_seed) / len(self.per_seed)

    def to_json_obj(self) -> dict:
        return {
            "problem": self.problem,
            "evals": self.evals,
            "count_win_rate": self.count_win_rate,
            "distance_win_rate": self.distance_win_rate,
            "per_seed": [vars(c) for c in self.per_seed],
        }


def compare(
    problem_factory,
    config: OptimizerConfig,
    ranges: PreferenceRanges,
    evals: int,
    seeds: list[int],
) -> tuple[CompareReport, dict[int, tuple[Optimizer, Optimizer]]]:
    """For each seed, run the preference-guided loop against the plain
    unrestricted-population loop with an identical seed and budget.

    ``problem_factory()`` must return a fresh ProblemSpec per run. Returns
    the paired statistics and the final optimizers per seed (pups, ups).
    """
    if len(seeds) < 2:
        raise ContractError("compare needs at least 2 seeds")
    per_seed = []
    runs: dict[int, tuple[Optimizer, Optimizer]] = {}
    for seed in seeds:
        arms = {}
        for use_prefs in (True, False):
            cfg = OptimizerConfig(
                minpopsize=config.minpopsize,
                burstsize=config.burstsize,
                initial_samples=config.initial_samples,
                de=config.de,
                seed=seed,
                use_preferences=use_prefs,
            )
            problem = problem_factory()
            script = RunScript.single(
                evals, ranges if use_prefs else PreferenceRanges.unbounded(ranges.k)
            )
            opt, _ = run_batch(problem, cfg, script)
            arms[use_prefs] = opt
        runs[seed] = (arms[True], arms[False])
        per_seed.append(_seed_stats(seed, arms[True], arms[False], ranges))
    report = CompareReport(arms[True].problem.name, evals, ranges, per_seed)
    return report, runs


def _seed_stats(
    seed: int, pups: Optimizer, ups: Optimizer, ranges: PreferenceRanges
) -> SeedComparison:
    stats = {}
    for tag, opt in (("pups", pups), ("ups", ups)):
        in_box = [
            s for s in opt.archive if violation(s.f, ranges).total_magnitude == 0.0
        ]
        dist = None
        if in_box and opt.problem.front_distance((0.0, 1.0)) is not None:
            ds = [opt.problem.front_distance(s.f) for s in in_box]
            dist = sum(ds) / len(ds)
        stats[tag] = (len(in_box), dist)
    return SeedComparison(
        seed,
        pups_in_box=stats["pups"][0],
        ups_in_box=stats["ups"][0],
        pups_mean_front_distance=stats["pups"][1],
        ups_mean_front_distance=stats["ups"][1],
    )


def load_script(path: str, k: int) -> RunScript:
    with open(path) as fh:
        return RunScript.from_json(json.load(fh), k)
