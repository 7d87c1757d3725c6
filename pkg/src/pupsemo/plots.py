"""Objective-space figures rendered to files alongside the delimited output.

Bi-objective scatter of history and archive, the analytic front where one
is known, and the preference box drawn as a rectangle.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .domain import PreferenceRanges, Solution
from .problems import ProblemSpec, zdt3_front_points


def _front_curve(problem: ProblemSpec) -> np.ndarray | None:
    if problem.builtin == "zdt1":
        t = np.linspace(0.0, 1.0, 512)
        return np.column_stack([t, 1.0 - np.sqrt(t)])
    if problem.builtin == "zdt3":
        return zdt3_front_points(4000)
    return None


def _draw_box(ax, ranges: PreferenceRanges):
    lo0, lo1 = ranges.lower[0], ranges.lower[1]
    hi0, hi1 = ranges.upper[0], ranges.upper[1]
    if any(not math.isfinite(v) for v in (lo0, lo1, hi0, hi1)):
        return
    ax.add_patch(
        plt.Rectangle(
            (lo0, lo1), hi0 - lo0, hi1 - lo1,
            fill=False, edgecolor="tab:red", linewidth=1.2, label="preference box",
        )
    )


def plot_run(
    problem: ProblemSpec,
    archive: Iterable[Solution],
    history: Iterable[Solution],
    ranges: PreferenceRanges,
    path: str | Path,
    title: str = "",
):
    """Scatter the evaluated history and the final archive in objective
    space (first two objectives)."""
    fig, ax = plt.subplots(figsize=(6, 5))
    hist = np.array([s.f for s in history]) if history else np.empty((0, 2))
    arch = np.array([s.f for s in archive]) if archive else np.empty((0, 2))
    if len(hist):
        ax.scatter(hist[:, 0], hist[:, 1], s=6, c="0.8", label="all evaluated")
    front = _front_curve(problem)
    if front is not None:
        ax.plot(front[:, 0], front[:, 1], "k.", markersize=1, label="analytic front")
    if len(arch):
        ax.scatter(arch[:, 0], arch[:, 1], s=14, c="tab:blue", label="archive")
    _draw_box(ax, ranges)
    ax.set_xlabel("f1")
    ax.set_ylabel("f2")
    ax.set_title(title or problem.name)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_comparison(
    problem: ProblemSpec,
    pups_archive: Iterable[Solution],
    ups_archive: Iterable[Solution],
    ranges: PreferenceRanges,
    path: str | Path,
):
    """Side-by-side archives of the preference-guided and plain runs."""
    fig, axes = plt.subplots(1, 2, figsize=(11, 5), sharex=True, sharey=True)
    front = _front_curve(problem)
    for ax, archive, label in (
        (axes[0], ups_archive, "unrestricted archive (no preferences)"),
        (axes[1], pups_archive, "preference guided"),
    ):
        if front is not None:
            ax.plot(front[:, 0], front[:, 1], "k.", markersize=1)
        arch = np.array([s.f for s in archive]) if archive else np.empty((0, 2))
        if len(arch):
            ax.scatter(arch[:, 0], arch[:, 1], s=14, c="tab:blue")
        _draw_box(ax, ranges)
        ax.set_title(label, fontsize=10)
        ax.set_xlabel("f1")
    axes[0].set_ylabel("f2")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
