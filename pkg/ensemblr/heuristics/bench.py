"""Micro-benchmark of greedy vs exact exclusive selection."""

import logging
import time
from typing import Iterable, List, NamedTuple

import numpy as np

from ensemblr.heuristics.selection import (
    SelectionProblem,
    check_assignment,
    exact_select,
    exclusive_select,
)

logger = logging.getLogger(__name__)


def random_selection_problem(
    rng: np.random.Generator,
    candidates: int,
    instances: int,
    density: float = 0.4,
    max_demand: int = 3,
) -> SelectionProblem:
    """Random problem with every candidate eligible for at least one instance."""
    iids = [f"i{j}" for j in range(instances)]
    demands = rng.integers(0, max_demand + 1, size=instances)
    built = []
    for c in range(candidates):
        mask = rng.random(instances) < density
        if not mask.any():
            mask[rng.integers(instances)] = True
        built.append((f"c{c:03d}", [iids[j] for j in np.flatnonzero(mask)]))
    return SelectionProblem.build(zip(iids, (int(d) for d in demands)), built)


class BenchRow(NamedTuple):
    candidates: int
    instances: int
    trials: int
    greedy_ms: float
    exact_ms: float
    feasible: int
    greedy_solved: int
    violations: int


def benchmark_selection(
    sizes: Iterable[int] = (10, 20, 40, 80, 160),
    trials: int = 50,
    seed: int = 0,
    restarts: int = 16,
) -> List[BenchRow]:
    """Time both strategies on growing random problems.

    Instances grow with a quarter of the candidates, demands up to three.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for size in sizes:
        instances = max(1, size // 4)
        greedy_time = exact_time = 0.0
        feasible = solved = violations = 0
        for trial in range(trials):
            problem = random_selection_problem(rng, size, instances, density=min(1.0, 4.0 / instances))
            started = time.perf_counter()
            greedy = exclusive_select(problem, seed=trial, restarts=restarts)
            greedy_time += time.perf_counter() - started
            started = time.perf_counter()
            exact = exact_select(problem)
            exact_time += time.perf_counter() - started
            if exact is not None:
                feasible += 1
                violations += len(check_assignment(problem, exact))
            if greedy is not None:
                solved += 1
                violations += len(check_assignment(problem, greedy))
        row = BenchRow(
            size,
            instances,
            trials,
            1000.0 * greedy_time / trials,
            1000.0 * exact_time / trials,
            feasible,
            solved,
            violations,
        )
        logger.info(
            f"{size} candidates: greedy {row.greedy_ms:.3f} ms, exact {row.exact_ms:.3f} ms, "
            f"greedy solved {solved}/{feasible} feasible"
        )
        rows.append(row)
    return rows
