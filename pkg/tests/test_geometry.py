import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzywsn.geometry import (
    InvalidK,
    NotAssigned,
    centrality,
    euclidean,
    kmeans,
    within_sse,
)

coord = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
point = st.tuples(coord, coord)


def optimal_sse(points, k):
    """Exact optimum by enumerating every assignment with non-empty clusters."""
    best = math.inf
    n = len(points)
    for labels in itertools.product(range(k), repeat=n - 1):
        labels = (0, *labels)  # fix the first point to break label symmetry
        if len(set(labels)) != k:
            continue
        lab = np.array(labels)
        sse = sum(((points[lab == c] - points[lab == c].mean(axis=0)) ** 2).sum() for c in range(k))
        best = min(best, sse)
    return best


def test_euclidean_examples():
    assert euclidean((0, 0), (3, 4)) == 5.0
    assert euclidean((7, 7), (7, 7)) == 0.0
    assert euclidean((5, 95), (100, 0)) == pytest.approx(134.35028842544403, abs=1e-12)


@given(point, point, point)
def test_euclidean_metric(p, q, r):
    assert euclidean(p, q) == euclidean(q, p)
    assert euclidean(p, q) >= 0.0
    assert euclidean(p, r) <= euclidean(p, q) + euclidean(q, r) + 1e-9


def test_k1_center_is_mean(rng):
    pts = rng.uniform(0, 100, (30, 2))
    layout = kmeans(pts, 1, 0)
    assert np.allclose(layout.centers[0], pts.mean(axis=0), rtol=0, atol=1e-12)
    assert (layout.labels == 0).all()


def test_two_blobs_recovered():
    pts = np.array([[0, 0], [1, 0], [0, 1], [50, 50], [51, 50], [50, 51]], dtype=float)
    layout = kmeans(pts, 2, 7)
    groups = {frozenset(layout.members(c).tolist()) for c in range(2)}
    assert groups == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
    assert layout.sse() == pytest.approx(optimal_sse(pts, 2), rel=1e-12)


def test_k_equals_n(rng):
    pts = rng.uniform(0, 10, (6, 2))
    layout = kmeans(pts, 6, 3)
    assert sorted(layout.sizes().tolist()) == [1] * 6
    assert layout.sse() == 0.0


def test_invalid_k():
    with pytest.raises(InvalidK):
        kmeans(np.zeros((3, 2)), 4, 0)
    with pytest.raises(InvalidK):
        kmeans(np.zeros((3, 2)), 0, 0)


def test_coincident_points_still_give_k_clusters():
    pts = np.ones((5, 2))
    layout = kmeans(pts, 3, 0)
    assert (layout.sizes() > 0).all()


def test_centrality_examples():
    pts = np.array([[10, 10], [16, 18], [90, 90]], dtype=float)
    layout = kmeans(pts, 2, 0, init=[[13, 14], [90, 90]], max_iter=1)
    # one pass: the first cluster's center becomes the mean (13, 14)
    assert centrality(layout, 0) == pytest.approx(5.0, abs=1e-12)
    assert centrality(layout, 2) == 0.0
    with pytest.raises(NotAssigned):
        centrality(layout, 9)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 25), st.integers(1, 4), st.integers(0, 2**32 - 1), st.randoms(use_true_random=False))
def test_layout_invariants_and_permutation(n, k, seed, shuffle_rng):
    k = min(k, n)
    pts = np.random.default_rng(seed).uniform(0, 100, (n, 2))
    ids = np.arange(n) * 3 + 1
    layout = kmeans(pts, k, seed, ids=ids)
    assert (layout.sizes() > 0).all()
    assert len(layout.labels) == n and set(layout.labels.tolist()) <= set(range(k))
    for c in range(k):
        member = layout.labels == c
        assert np.allclose(layout.centers[c], layout.points[member].mean(axis=0), atol=1e-9)
    perm = list(range(n))
    shuffle_rng.shuffle(perm)
    other = kmeans(pts[perm], k, seed, ids=ids[perm])
    assert np.array_equal(other.labels, layout.labels)
    assert np.array_equal(other.centers, layout.centers)
    assert np.array_equal(other.ids, layout.ids)


def test_sse_non_increasing_over_iterations(rng):
    pts = rng.uniform(0, 100, (60, 2))
    init = pts[:4].copy()
    prev = math.inf
    for it in range(1, 15):
        layout = kmeans(pts, 4, 0, init=init, max_iter=it)
        assert layout.sse() <= prev + 1e-9
        prev = layout.sse()


def test_sse_helper():
    pts = np.array([[0.0, 0.0], [2.0, 0.0]])
    assert within_sse(pts, [0, 0], [[1.0, 0.0]]) == 2.0


def test_restart_count_validation():
    with pytest.raises(ValueError):
        kmeans(np.zeros((3, 2)), 1, 0, n_init=0)


def test_small_instances_mostly_reach_optimum():
    # restarts make a local optimum rare, not impossible
    hits = 0
    for seed in range(20):
        pts = np.random.default_rng([10, seed]).uniform(0, 100, (7, 2))
        hits += all(kmeans(pts, k, seed).sse() <= optimal_sse(pts, k) * (1 + 1e-9) for k in (2, 3))
    assert hits >= 18
