"""Preference-guided evolutionary multiobjective optimization workbench.

An unrestricted non-dominated archive driven by DE/rand/1 point generation,
steered at run time by per-objective preference ranges, with a live HTTP
session service and a headless experiment CLI.
"""

from .domain import (
    GroupedView,
    PreferenceRanges,
    Relation,
    Solution,
    ViolationReport,
    dominates,
    group_solutions,
    nondominated_filter,
    nondominated_fronts,
    violation,
)
from .optimizer import DEParams, Optimizer, OptimizerConfig
from .problems import ProblemSpec, builtin_problem, load_problem
from .session import RunSnapshot, RunStatus, Session

__all__ = [
    "DEParams",
    "GroupedView",
    "Optimizer",
    "OptimizerConfig",
    "PreferenceRanges",
    "ProblemSpec",
    "Relation",
    "RunSnapshot",
    "RunStatus",
    "Session",
    "Solution",
    "ViolationReport",
    "builtin_problem",
    "dominates",
    "group_solutions",
    "load_problem",
    "nondominated_filter",
    "nondominated_fronts",
    "violation",
]
