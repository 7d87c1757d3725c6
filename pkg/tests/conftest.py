import sys
from pathlib import Path

import pytest

from pupsemo.domain import Solution

EVALUATOR_DIR = Path(__file__).parent / "evaluators"
PYTHON = sys.executable


def make_solution(f, eval_index=0, x=None):
    """Solution with a placeholder decision vector when only objectives matter."""
    if x is None:
        x = (0.5,) * 2
    return Solution(tuple(x), tuple(float(v) for v in f), eval_index)


@pytest.fixture
def solutions_from():
    def build(objective_vectors):
        return [make_solution(f, i) for i, f in enumerate(objective_vectors)]

    return build
