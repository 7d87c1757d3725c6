"""Command-line driver: batch runs, scripted schedules, paired comparisons,
and the live HTTP session service.

Every batch command writes delimited exports (history.csv, archive.csv),
a JSON report, and an objective-space figure into the output directory.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import click

from .batch import CompareReport, RunScript, compare, load_script, run_batch
from .domain import PreferenceRanges
from .export import write_json, write_solutions_csv, write_solutions_json
from .optimizer import DEParams, OptimizerConfig
from .plots import plot_comparison, plot_run
from .problems import ProblemSpec, builtin_problem, load_problem


def parse_ranges(text: str, k: int) -> PreferenceRanges:
    """Parse 'lo1:hi1,lo2:hi2,...'; '-inf'/'inf' (or empty) mark unbounded."""
    if not text:
        return PreferenceRanges.unbounded(k)
    lower, upper = [], []
    parts = text.split(",")
    if len(parts) != k:
        raise click.BadParameter(f"expected {k} ranges, got {len(parts)}")
    for part in parts:
        lo_s, _, hi_s = part.partition(":")
        lower.append(float(lo_s) if lo_s not in ("", "-inf") else -math.inf)
        upper.append(float(hi_s) if hi_s not in ("", "inf") else math.inf)
    return PreferenceRanges(tuple(lower), tuple(upper))


def resolve_problem(name_or_path: str, n: int) -> ProblemSpec:
    if name_or_path.endswith(".json") or "/" in name_or_path:
        return load_problem(name_or_path)
    return builtin_problem(name_or_path, n=n)


def make_config(seed, burstsize, minpopsize, initial_samples, f, cr) -> OptimizerConfig:
    return OptimizerConfig(
        minpopsize=minpopsize,
        burstsize=burstsize,
        initial_samples=initial_samples,
        de=DEParams(F=f, CR=cr),
        seed=seed,
    )


common_options = [
    click.option("--problem", "problem_ref", default="zdt1", show_default=True,
                 help="builtin name (zdt1/zdt3) or problem JSON file"),
    click.option("--dim", default=30, show_default=True, help="decision dimension for builtins"),
    click.option("--seed", default=0, show_default=True),
    click.option("--burstsize", default=10, show_default=True),
    click.option("--minpopsize", default=10, show_default=True),
    click.option("--initial-samples", default=100, show_default=True),
    click.option("--de-f", default=0.8, show_default=True, help="DE scaling factor"),
    click.option("--de-cr", default=0.5, show_default=True, help="DE crossover probability"),
    click.option("--out", default="out", show_default=True, help="output directory"),
]


def with_common(fn):
    for opt in reversed(common_options):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Preference-guided unrestricted-archive multiobjective optimization."""


def _write_outputs(out: Path, optimizer, report, ranges: PreferenceRanges):
    out.mkdir(parents=True, exist_ok=True)
    n, k = optimizer.problem.n, optimizer.problem.k
    write_solutions_csv(optimizer.all_points, out / "history.csv", n, k)
    write_solutions_csv(optimizer.archive, out / "archive.csv", n, k)
    write_solutions_json(optimizer.archive, out / "archive.json")
    write_json(report.to_json_obj(), out / "report.json")
    if k == 2:
        plot_run(optimizer.problem, optimizer.archive, optimizer.all_points,
                 ranges, out / "archive.png")
    click.echo(f"{optimizer.eval_count} evaluations, archive size {len(optimizer.archive)}")
    click.echo(f"outputs written to {out}/")


@main.command()
@with_common
@click.option("--evals", default=1000, show_default=True)
@click.option("--ranges", "ranges_text", default="", help="preferred ranges 'lo1:hi1,lo2:hi2'")
def run(problem_ref, dim, seed, burstsize, minpopsize, initial_samples, de_f, de_cr,
        out, evals, ranges_text):
    """Single run with fixed preference ranges (a priori usage)."""
    problem = resolve_problem(problem_ref, dim)
    ranges = parse_ranges(ranges_text, problem.k)
    config = make_config(seed, burstsize, minpopsize, initial_samples, de_f, de_cr)
    optimizer, report = run_batch(problem, config, RunScript.single(evals, ranges))
    _write_outputs(Path(out), optimizer, report, ranges)


@main.command("script")
@with_common
@click.option("--file", "script_file", required=True, help="RunScript JSON (phases of evals+ranges)")
def script_cmd(problem_ref, dim, seed, burstsize, minpopsize, initial_samples, de_f, de_cr,
               out, script_file):
    """Run a multi-phase preference schedule standing in for the DM."""
    problem = resolve_problem(problem_ref, dim)
    script = load_script(script_file, problem.k)
    config = make_config(seed, burstsize, minpopsize, initial_samples, de_f, de_cr)
    optimizer, report = run_batch(problem, config, script)
    _write_outputs(Path(out), optimizer, report, script.phases[-1].ranges)


@main.command("compare")
@with_common
@click.option("--evals", default=1000, show_default=True)
@click.option("--ranges", "ranges_text", required=True)
@click.option("--seeds", "n_seeds", default=20, show_default=True)
def compare_cmd(problem_ref, dim, seed, burstsize, minpopsize, initial_samples, de_f, de_cr,
                out, evals, ranges_text, n_seeds):
    """Paired preference-vs-plain comparison over several seeds."""
    problem = resolve_problem(problem_ref, dim)
    ranges = parse_ranges(ranges_text, problem.k)
    config = make_config(seed, burstsize, minpopsize, initial_samples, de_f, de_cr)
    seeds = [seed + i for i in range(n_seeds)]
    report, runs = compare(lambda: resolve_problem(problem_ref, dim), config, ranges, evals, seeds)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    write_json(report.to_json_obj(), out / "compare.json")
    _write_compare_csv(report, out / "compare.csv")
    pups, ups = runs[seeds[0]]
    if problem.k == 2:
        plot_comparison(problem, pups.archive, ups.archive, ranges, out / "compare.png")
    click.echo(f"in-box count win rate:    {report.count_win_rate:.2f}")
    click.echo(f"front-distance win rate:  {report.distance_win_rate:.2f}")
    click.echo(f"outputs written to {out}/")


def _write_compare_csv(report: CompareReport, path: Path):
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed", "pups_in_box", "ups_in_box",
                         "pups_mean_front_distance", "ups_mean_front_distance"])
        for c in report.per_seed:
            writer.writerow([c.seed, c.pups_in_box, c.ups_in_box,
                             c.pups_mean_front_distance, c.ups_mean_front_distance])


@main.command()
@click.option("--problem", "problem_ref", default="zdt1", show_default=True)
@click.option("--dim", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--burstsize", default=10, show_default=True)
@click.option("--minpopsize", default=10, show_default=True)
@click.option("--initial-samples", default=100, show_default=True)
@click.option("--budget", default=0, show_default=True, help="initial evaluation budget")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
def serve(problem_ref, dim, seed, burstsize, minpopsize, initial_samples, budget, host, port):
    """Launch the live session service for interactive steering."""
    import uvicorn

    from .service import create_app
    from .session import Session

    problem = resolve_problem(problem_ref, dim)
    config = make_config(seed, burstsize, minpopsize, initial_samples, 0.8, 0.5)
    session = Session(problem, config, budget=budget)
    app = create_app(session)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        session.close()


if __name__ == "__main__":
    main()
