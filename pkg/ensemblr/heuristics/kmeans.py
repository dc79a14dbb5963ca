"""Lloyd's k-means.

Initial centroids are k distinct points drawn uniformly with a seeded
generator. An empty cluster is re-seeded to the point farthest from its
centroid, which never increases the inertia.
"""

import logging
from typing import List, NamedTuple, Optional

import numpy as np

from ensemblr.utils.errors import ContractError

logger = logging.getLogger(__name__)


class KMeansResult(NamedTuple):
    centroids: np.ndarray
    labels: np.ndarray
    inertia: float


def _assign(points: np.ndarray, centroids: np.ndarray):
    distances = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = distances.argmin(axis=1)
    closest = distances[np.arange(len(points)), labels]
    return labels, closest


def _lloyd(
    points: np.ndarray,
    k: int,
    rng: np.random.Generator,
    max_iters: int,
    tol: float,
    history: Optional[List[float]],
) -> KMeansResult:
    centroids = points[rng.choice(len(points), size=k, replace=False)].copy()
    labels, closest = _assign(points, centroids)
    for iteration in range(max_iters):
        if history is not None:
            history.append(float(closest.sum()))
        updated = centroids.copy()
        taken = np.zeros(len(points), dtype=bool)
        for c in range(k):
            members = labels == c
            if members.any():
                updated[c] = points[members].mean(axis=0)
        for c in range(k):
            if not (labels == c).any():
                far = np.where(taken, -1.0, closest)
                index = int(far.argmax())
                taken[index] = True
                updated[c] = points[index]
        shift = float(np.sqrt(((updated - centroids) ** 2).sum(axis=1)).max())
        centroids = updated
        labels, closest = _assign(points, centroids)
        if shift < tol:
            logger.debug(f"k-means converged after {iteration + 1} iterations")
            break
    if history is not None:
        history.append(float(closest.sum()))
    return KMeansResult(centroids, labels, float(closest.sum()))


def kmeans(
    points,
    k: int,
    seed: int = 0,
    max_iters: int = 100,
    tol: float = 1e-9,
    n_init: int = 1,
    history: Optional[List[float]] = None,
) -> KMeansResult:
    """Cluster points into k clusters with Lloyd iterations.

    Args:
        points: (n, d) array-like
        k: Number of clusters, 1 <= k <= n
        seed: Seed of the initial centroid draw
        max_iters: Upper bound of Lloyd iterations per run
        tol: Stop when no centroid moves farther than this
        n_init: Independent seeded runs; the lowest inertia wins
        history: If given, receives the inertia after every assignment of the winning run

    Returns:
        KMeansResult(centroids, labels, inertia)
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = len(points)
    if n == 0:
        raise ContractError("k-means needs at least one point")
    if not 1 <= k <= n:
        raise ContractError(f"k must lie in [1, {n}], got {k}")
    if n_init < 1:
        raise ContractError("n_init must be at least 1")
    rng = np.random.default_rng(seed)
    best: Optional[KMeansResult] = None
    best_history: List[float] = []
    for _ in range(n_init):
        run_history: List[float] = []
        result = _lloyd(points, k, rng, max_iters, tol, run_history)
        if best is None or result.inertia < best.inertia:
            best, best_history = result, run_history
    if history is not None:
        history.extend(best_history)
    return best
