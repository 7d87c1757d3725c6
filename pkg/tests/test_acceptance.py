"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report lines. Statistical criteria (A3, A4) use fixed seed sets and include
their stated runtime budgets.
"""

import math
import time

import numpy as np
import pytest

from pupsemo.batch import Phase, RunScript, compare, run_batch
from pupsemo.domain import (
    PreferenceRanges,
    group_solutions,
    nondominated_filter,
    nondominated_fronts,
    violation,
)
from pupsemo.optimizer import Optimizer, OptimizerConfig
from pupsemo.problems import EvaluationError, ProblemSpec, builtin_problem
from pupsemo.session import RunStatus, Session

from conftest import EVALUATOR_DIR, PYTHON, make_solution
from oracles import brute_group, pairwise_fronts, pairwise_nondominated_mask

PAPER_CONFIG = dict(minpopsize=10, burstsize=10, initial_samples=100)


def report(criterion, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion} failed: {detail}"


def test_a1_dominance_oracle():
    """A1: filter and front-peeling match O(n^2) brute force, 1000 instances."""
    rng = np.random.default_rng(1)
    start = time.monotonic()
    for trial in range(1000):
        k = int(rng.choice([2, 3, 5]))
        n = int(rng.integers(1, 201))
        objs = rng.random((n, k))
        if trial % 3 == 0:  # force objective-space duplicates
            objs[rng.integers(n)] = objs[rng.integers(n)]
        sols = [make_solution(tuple(f), i) for i, f in enumerate(objs)]
        got = {s.eval_index for s in nondominated_filter(sols)}
        mask = pairwise_nondominated_mask(objs)
        expected = {i for i, m in enumerate(mask) if m}
        assert got == expected, f"filter mismatch on trial {trial}"
        needed = int(rng.integers(1, n + 1))
        got_fronts = [
            sorted(s.eval_index for s in fr) for fr in nondominated_fronts(sols, needed)
        ]
        expected_fronts = [sorted(fr) for fr in pairwise_fronts(objs, needed)]
        assert got_fronts == expected_fronts, f"fronts mismatch on trial {trial}"
    elapsed = time.monotonic() - start
    report("A1 dominance oracle", elapsed < 10.0,
           f"1000 instances exact, {elapsed:.1f}s (< 10s)")


def test_a2_grouping_oracle():
    """A2: group_solutions matches brute-force count/sort, tie cases included."""
    rng = np.random.default_rng(2)
    start = time.monotonic()
    for trial in range(500):
        k = int(rng.choice([2, 3, 5]))
        n = int(rng.integers(0, 200))
        objs = rng.random((n, k))
        if trial % 2 == 0:  # quantize to force magnitude ties
            objs = np.round(objs, 1)
        lower = tuple(rng.random(k) * 0.5)
        upper = tuple(lo + float(rng.random()) * 0.5 for lo in lower)
        sols = [make_solution(tuple(f), i) for i, f in enumerate(objs)]
        view = group_solutions(sols, PreferenceRanges(lower, upper))
        expected = brute_group(sols, lower, upper)
        assert [[s.eval_index for s in g] for g in view.groups] == [
            [s.eval_index for s in g] for g in expected
        ], f"grouping mismatch on trial {trial}"
    elapsed = time.monotonic() - start
    report("A2 grouping oracle", elapsed < 5.0,
           f"500 instances exact incl. ties, {elapsed:.1f}s (< 5s)")


def test_a3_preference_guidance_beats_plain_archive():
    """A3: ZDT1, 1000 evals, box [0,0.5]^2, 20 paired seeds: the
    preference-guided arm wins on in-box count >= 90% and on in-box front
    distance >= 80% of pairs."""
    start = time.monotonic()
    box = PreferenceRanges((0.0, 0.0), (0.5, 0.5))
    cfg = OptimizerConfig(**PAPER_CONFIG)
    rep, _ = compare(lambda: builtin_problem("zdt1"), cfg, box, 1000, list(range(20)))
    elapsed = time.monotonic() - start
    ok = rep.count_win_rate >= 0.9 and rep.distance_win_rate >= 0.8 and elapsed < 120
    report("A3 paired guidance comparison", ok,
           f"count win rate {rep.count_win_rate:.2f} (>= 0.90), "
           f"distance win rate {rep.distance_win_rate:.2f} (>= 0.80), "
           f"{elapsed:.0f}s (< 120s)")


def test_a4_off_front_box_violation_shrinks():
    """A4: ZDT3, 2000 evals, preference box missing the front entirely;
    mean minimum violation at 2000 evals strictly below its value at 200."""
    start = time.monotonic()
    # the ZDT3 front never reaches f2 < -0.774; this box is unattainable
    box = PreferenceRanges((0.2, -1.2), (0.3, -1.0))
    at_200, at_2000 = [], []
    for seed in range(20):
        opt = Optimizer(builtin_problem("zdt3"), OptimizerConfig(seed=seed, **PAPER_CONFIG), box)
        opt.sample_initial()
        first = None
        while opt.eval_count < 2000:
            opt.step(max_children=2000 - opt.eval_count)
            if first is None and opt.eval_count >= 200:
                first = min(violation(s.f, box).total_magnitude for s in opt.archive)
        assert len(opt.archive) > 0
        at_200.append(first)
        at_2000.append(min(violation(s.f, box).total_magnitude for s in opt.archive))
    elapsed = time.monotonic() - start
    mean_200 = sum(at_200) / len(at_200)
    mean_2000 = sum(at_2000) / len(at_2000)
    ok = mean_2000 < mean_200 and elapsed < 180
    report("A4 near-miss preference pursuit", ok,
           f"mean min violation {mean_200:.3f} @200 -> {mean_2000:.3f} @2000, "
           f"{elapsed:.0f}s (< 180s)")


def test_a5_no_deterioration_replay():
    """A5: 5 seeded ZDT1 runs of 2000 evals; at every step boundary no
    evaluated point dominates any archive member. Exact."""
    boundaries = 0
    for seed in range(5):
        opt = Optimizer(builtin_problem("zdt1"), OptimizerConfig(seed=seed, **PAPER_CONFIG))
        opt.sample_initial()

        def check(o):
            nonlocal boundaries
            boundaries += 1
            hist = np.array([s.f for s in o.all_points])
            arch = np.array([s.f for s in o.archive])
            dominated = (
                (hist[:, None, :] <= arch[None, :, :]).all(axis=2)
                & (hist[:, None, :] < arch[None, :, :]).any(axis=2)
            ).any()
            assert not dominated, f"archive deteriorated at eval {o.eval_count}"

        check(opt)
        while opt.eval_count < 2000:
            opt.step(max_children=2000 - opt.eval_count)
            check(opt)
    report("A5 no-deterioration replay", True,
           f"5 seeds x 2000 evals, {boundaries} boundaries checked exactly")


def test_a6_degenerate_preference_equivalence():
    """A6: unbounded ranges + shared seed: the preference-guided loop's
    evaluation sequence is bit-identical to the plain loop's."""
    def trace(use_preferences):
        cfg = OptimizerConfig(seed=12, use_preferences=use_preferences, **PAPER_CONFIG)
        opt = Optimizer(builtin_problem("zdt1"), cfg)
        opt.sample_initial()
        while opt.eval_count < 600:
            opt.step(max_children=600 - opt.eval_count)
        return [(s.x, s.f) for s in opt.all_points]

    ok = trace(True) == trace(False)
    report("A6 degenerate-preference equivalence", ok,
           "600-eval traces bit-identical")


WALKTHROUGH = RunScript((
    Phase(100, PreferenceRanges.unbounded(2)),
    Phase(400, PreferenceRanges((0.4, 0.0), (0.9, 1.0))),
    Phase(900, PreferenceRanges((0.7, 0.1), (0.8, 0.2))),
    Phase(600, PreferenceRanges((0.1, 0.6), (0.2, 1.0))),
))


def test_a7_walkthrough_script():
    """A7: the four-phase interactive schedule ends at exactly 2000
    evaluations with non-empty pass-all groups in both final boxes."""
    opt, rep = run_batch(builtin_problem("zdt1"), OptimizerConfig(seed=0, **PAPER_CONFIG),
                         WALKTHROUGH)
    box3 = WALKTHROUGH.phases[2].ranges
    box4 = WALKTHROUGH.phases[3].ranges
    pass3 = len(group_solutions(opt.archive, box3).groups[0])
    pass4 = len(group_solutions(opt.archive, box4).groups[0])
    ok = opt.eval_count == 2000 and pass3 > 0 and pass4 > 0
    report("A7 walkthrough script", ok,
           f"{opt.eval_count} evals (== 2000), pass-all counts {pass3} and {pass4} "
           f"in the two final boxes")


def test_a8_mid_run_range_injection():
    """A8: ranges applied while RUNNING take effect at the next parent-pool
    boundary; the instrumented boundary log never shows a mixed range set."""
    old = PreferenceRanges.unbounded(2)
    new = PreferenceRanges((0.0, 0.0), (0.5, 0.5))
    s = Session(builtin_problem("zdt1"),
                OptimizerConfig(seed=0, **PAPER_CONFIG), budget=100_000)
    try:
        s.start()
        deadline = time.monotonic() + 10
        while time.monotonic() < deadline and not (
            s.snapshot().run_status is RunStatus.PAUSED and s.snapshot().eval_count >= 100
        ):
            time.sleep(0.005)
        s.start()
        while time.monotonic() < deadline and s.snapshot().eval_count < 400:
            time.sleep(0.002)
        assert s.snapshot().run_status is RunStatus.RUNNING
        count_at_apply = s.optimizer.eval_count
        s.apply_ranges(new)
        while time.monotonic() < deadline and s.snapshot().eval_count < count_at_apply + 200:
            time.sleep(0.002)
        s.stop()
        while time.monotonic() < deadline and s.snapshot().run_status is not RunStatus.PAUSED:
            time.sleep(0.002)
        log = list(s.optimizer.range_log)
    finally:
        s.close()
    assert all(r in (old, new) for _, r in log), "half-updated range set observed"
    switch = next(i for i, (_, r) in enumerate(log) if r == new)
    assert all(r == old for _, r in log[:switch])
    assert all(r == new for _, r in log[switch:])
    boundary_count = log[switch][0]
    ok = boundary_count >= count_at_apply
    report("A8 mid-run injection", ok,
           f"applied at eval {count_at_apply}, first boundary using new ranges "
           f"at eval {boundary_count}, log atomic over {len(log)} boundaries")


def test_a9_evaluator_protocol():
    """A9: subprocess evaluator matches the builtin to 1e-12; malformed
    replies raise without advancing eval_count."""
    external = ProblemSpec(
        "zdt1-ext", 2, 30, ((0.0, 1.0),) * 30,
        command=(PYTHON, str(EVALUATOR_DIR / "zdt1_server.py")),
    )
    builtin = builtin_problem("zdt1")
    rng = np.random.default_rng(9)
    try:
        worst = 0.0
        for _ in range(100):
            x = rng.random(30)
            diff = np.max(np.abs(external.evaluate(x) - builtin.evaluate(x)))
            worst = max(worst, float(diff))
        assert worst <= 1e-12
    finally:
        external.close()

    broken = ProblemSpec(
        "broken", 2, 30, ((0.0, 1.0),) * 30,
        command=(PYTHON, str(EVALUATOR_DIR / "broken_server.py"), "garbage"),
        timeout=5.0,
    )
    opt = Optimizer(broken, OptimizerConfig(seed=0, **PAPER_CONFIG))
    try:
        with pytest.raises(EvaluationError):
            opt.sample_initial()
        assert opt.eval_count == 0
        assert opt.all_points == []
    finally:
        broken.close()
    report("A9 evaluator protocol", True,
           f"100-point match within {worst:.1e} (<= 1e-12); malformed replies "
           "raise with eval_count unchanged")
