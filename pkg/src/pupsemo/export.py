"""Delimited and JSON export of evaluated solutions.

Doubles are written with 17 significant digits so an export/import round
trip is bit-lossless.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable

from .domain import Solution


def csv_header(n: int, k: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)] + [f"f{i + 1}" for i in range(k)] + ["eval_index"]


def write_solutions_csv(solutions: Iterable[Solution], path: str | Path, n: int, k: int):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(csv_header(n, k))
        for s in solutions:
            writer.writerow(
                [f"{v:.17g}" for v in s.x] + [f"{v:.17g}" for v in s.f] + [s.eval_index]
            )


def read_solutions_csv(path: str | Path) -> list[Solution]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        n = sum(1 for h in header if h.startswith("x"))
        k = sum(1 for h in header if h.startswith("f"))
        out = []
        for row in reader:
            out.append(
                Solution(
                    tuple(float(v) for v in row[:n]),
                    tuple(float(v) for v in row[n : n + k]),
                    int(row[n + k]),
                )
            )
        return out


def write_solutions_json(solutions: Iterable[Solution], path: str | Path):
    doc = [{"x": list(s.x), "f": list(s.f), "eval_index": s.eval_index} for s in solutions]
    with open(path, "w") as fh:
        json.dump(doc, fh)


def write_json(doc: dict, path: str | Path):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, default=str)
