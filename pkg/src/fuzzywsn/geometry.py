"""Euclidean distance and per-round k-means clustering."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

MAX_ITER = 100
# Lloyd restarts; a single k-means++ start lands in a local optimum on
# about half of small random instances
N_INIT = 20


class InvalidK(ValueError):
    pass


class NotAssigned(KeyError):
    pass


def euclidean(p, q) -> float:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return math.sqrt(dx * dx + dy * dy)


def distances(points, target) -> np.ndarray:
    """Distance from each row of ``points`` to a single ``target`` point."""
    pts = np.asarray(points, dtype=np.float64)
    dx = pts[:, 0] - target[0]
    dy = pts[:, 1] - target[1]
    return np.sqrt(dx * dx + dy * dy)


def pairwise(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    dx = a[:, None, 0] - b[None, :, 0]
    dy = a[:, None, 1] - b[None, :, 1]
    return np.sqrt(dx * dx + dy * dy)


@dataclass(frozen=True)
class ClusterLayout:
    """k-means result; ``ids``, ``points`` and ``labels`` are aligned and sorted by id."""

    k: int
    ids: np.ndarray
    points: np.ndarray
    labels: np.ndarray
    centers: np.ndarray
    iterations: int

    def cluster_of(self, node_id: int) -> int:
        pos = np.searchsorted(self.ids, node_id)
        if pos >= len(self.ids) or self.ids[pos] != node_id:
            raise NotAssigned(node_id)
        return int(self.labels[pos])

    def members(self, cluster: int) -> np.ndarray:
        return self.ids[self.labels == cluster]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def centralities(self) -> np.ndarray:
        """Distance of every assigned point to its own cluster center."""
        c = self.centers[self.labels]
        dx = self.points[:, 0] - c[:, 0]
        dy = self.points[:, 1] - c[:, 1]
        return np.sqrt(dx * dx + dy * dy)

    def sse(self) -> float:
        return within_sse(self.points, self.labels, self.centers)


def within_sse(points, labels, centers) -> float:
    c = np.asarray(centers)[np.asarray(labels)]
    d = np.asarray(points) - c
    return math.fsum((d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1]).tolist())


def centrality(layout: ClusterLayout, node_id: int) -> float:
    pos = np.searchsorted(layout.ids, node_id)
    cluster = layout.cluster_of(node_id)
    return euclidean(layout.points[pos], layout.centers[cluster])


def kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: each new center drawn with probability ~ squared distance."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    return _kernels.kmeans_pp(pts, int(rng.integers(len(pts))), rng.random(k - 1))


def kmeans(points, k: int, seed, ids=None, max_iter: int = MAX_ITER, init=None,
           n_init: int = N_INIT) -> ClusterLayout:
    """Cluster 2-D points into exactly ``k`` non-empty groups.

    ``seed`` is an int or a ``numpy.random.Generator``. Points are processed
    in ascending ``ids`` order (defaults to input order), so permuting the
    input along with its ids does not change the result. Lloyd runs from
    ``n_init`` k-means++ starts and the lowest-SSE result is kept (the
    earliest on ties); an explicit ``init`` gives a single run.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = len(pts)
    if k < 1 or n == 0 or k > n:
        raise InvalidK(f"need 1 <= k <= {n} points, got k={k}")
    ids = np.arange(n) if ids is None else np.asarray(ids, dtype=np.int64)
    order = np.argsort(ids, kind="stable")
    ids, pts = ids[order], np.ascontiguousarray(pts[order])
    if n_init < 1:
        raise ValueError("n_init must be at least 1")
    if init is not None:
        labels, centers, iterations = _kernels.lloyd(pts, np.asarray(init, dtype=np.float64), max_iter)
        return ClusterLayout(k, ids, pts, labels, centers, iterations)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    firsts = rng.integers(n, size=n_init)
    uniforms = rng.random((n_init, k - 1))
    labels, centers, iterations = _kernels.kmeans_restarts(pts, firsts, uniforms, max_iter)
    return ClusterLayout(k, ids, pts, labels, centers, iterations)
