"""Assignment heuristics: exclusive selection, partitioning, clustering."""

from ensemblr.heuristics.selection import (
    Assignment,
    ExclusiveSelector,
    SelectionProblem,
    check_assignment,
    exact_select,
    exclusive_select,
)
from ensemblr.heuristics.partition import partition
from ensemblr.heuristics.kmeans import KMeansResult, kmeans
from ensemblr.heuristics.bench import benchmark_selection, random_selection_problem

__all__ = [
    "Assignment",
    "ExclusiveSelector",
    "SelectionProblem",
    "check_assignment",
    "exact_select",
    "exclusive_select",
    "partition",
    "KMeansResult",
    "kmeans",
    "benchmark_selection",
    "random_selection_problem",
]
