"""Pure-Python kernels.

Reference implementations of the hot loops. The Cython module mirrors
these line for line so both backends produce identical floats.
"""

import math

import numpy as np


def membership(x, a, b, c, d):
    """Degree of ``x`` in the trapezoid (a, b, c, d); triangles use b == c."""
    if b <= x <= c:
        return 1.0
    if a < x < b:
        return (x - a) / (b - a)
    if c < x < d:
        return (d - x) / (d - c)
    return 0.0


def _assign(xs, ys, cx, cy, labels):
    k = len(cx)
    for i in range(len(xs)):
        dx = xs[i] - cx[0]
        dy = ys[i] - cy[0]
        best = 0
        best_d = dx * dx + dy * dy
        for j in range(1, k):
            dx = xs[i] - cx[j]
            dy = ys[i] - cy[j]
            d = dx * dx + dy * dy
            if d < best_d:
                best_d = d
                best = j
        labels[i] = best


def _repair_empty(xs, ys, cx, cy, labels, counts):
    for j in range(len(cx)):
        if counts[j] != 0:
            continue
        far = -1
        far_d = -1.0
        for i in range(len(xs)):
            li = labels[i]
            if counts[li] <= 1:
                continue
            dx = xs[i] - cx[li]
            dy = ys[i] - cy[li]
            d = dx * dx + dy * dy
            if d > far_d:
                far_d = d
                far = i
        counts[labels[far]] -= 1
        labels[far] = j
        counts[j] = 1


def _means(xs, ys, labels, k):
    sx = [0.0] * k
    sy = [0.0] * k
    counts = [0] * k
    for i in range(len(xs)):
        j = labels[i]
        sx[j] += xs[i]
        sy[j] += ys[i]
        counts[j] += 1
    cx = [sx[j] / counts[j] for j in range(k)]
    cy = [sy[j] / counts[j] for j in range(k)]
    return cx, cy


def lloyd(points, centers, max_iter):
    """Lloyd iterations from the given initial centers.

    Returns ``(labels, centers, iterations)``. Empty clusters are refilled
    with the point farthest from its own center before every mean update.
    """
    pts = np.asarray(points, dtype=np.float64)
    init = np.asarray(centers, dtype=np.float64)
    n, k = len(pts), len(init)
    xs, ys = pts[:, 0].tolist(), pts[:, 1].tolist()
    cx, cy = init[:, 0].tolist(), init[:, 1].tolist()
    labels = [0] * n
    _assign(xs, ys, cx, cy, labels)
    iterations = 0
    while True:
        counts = [0] * k
        for j in labels:
            counts[j] += 1
        _repair_empty(xs, ys, cx, cy, labels, counts)
        cx, cy = _means(xs, ys, labels, k)
        iterations += 1
        if iterations >= max_iter:
            break
        new = [0] * n
        _assign(xs, ys, cx, cy, new)
        if new == labels:
            break
        labels = new
    out = np.empty((k, 2), dtype=np.float64)
    out[:, 0] = cx
    out[:, 1] = cy
    return np.asarray(labels, dtype=np.int64), out, iterations


def kmeans_pp(points, first, uniforms):
    """k-means++ seeding from pre-drawn randomness.

    ``first`` indexes the first center; ``uniforms[j - 1]`` in [0, 1) picks
    center ``j`` with probability proportional to squared distance from the
    nearest center so far. If every point coincides with a center the
    uniform picks a point directly.
    """
    pts = np.asarray(points, dtype=np.float64)
    xs, ys = pts[:, 0].tolist(), pts[:, 1].tolist()
    n = len(xs)
    k = len(uniforms) + 1
    out = np.empty((k, 2), dtype=np.float64)
    idx = int(first)
    out[0] = (xs[idx], ys[idx])
    d2 = []
    for i in range(n):
        dx = xs[i] - xs[idx]
        dy = ys[i] - ys[idx]
        d2.append(dx * dx + dy * dy)
    for j in range(1, k):
        total = 0.0
        for i in range(n):
            total += d2[i]
        u = float(uniforms[j - 1])
        if total > 0.0:
            target = u * total
            idx = n - 1
            acc = 0.0
            for i in range(n):
                acc += d2[i]
                if acc > target:
                    idx = i
                    break
        else:
            idx = min(int(u * n), n - 1)
        out[j] = (xs[idx], ys[idx])
        for i in range(n):
            dx = xs[i] - xs[idx]
            dy = ys[i] - ys[idx]
            d = dx * dx + dy * dy
            if d < d2[i]:
                d2[i] = d
    return out


def sse(points, labels, centers):
    """Within-cluster sum of squares, summed in point order."""
    pts = np.asarray(points, dtype=np.float64).tolist()
    cen = np.asarray(centers, dtype=np.float64).tolist()
    total = 0.0
    for (x, y), j in zip(pts, np.asarray(labels).tolist()):
        dx = x - cen[j][0]
        dy = y - cen[j][1]
        total += dx * dx + dy * dy
    return total


def kmeans_restarts(points, firsts, uniforms, max_iter):
    """Lloyd from one k-means++ start per row of draws; lowest SSE wins, earliest on ties."""
    best = None
    best_sse = math.inf
    for first, u in zip(np.asarray(firsts).tolist(), np.asarray(uniforms, dtype=np.float64)):
        result = lloyd(points, kmeans_pp(points, first, u), max_iter)
        s = sse(points, result[0], result[1])
        if s < best_sse:
            best, best_sse = result, s
    return best


def infer_batch(inputs, lo, hi, mf, rules, centroids):
    """Product-inference, center-average output for each input row.

    ``mf`` has shape (variables, labels, 4); ``rules`` holds one label index
    per variable. Rows where no rule fires come back as NaN.
    """
    rows = np.asarray(inputs, dtype=np.float64).tolist()
    lo = list(lo)
    hi = list(hi)
    mf = np.asarray(mf, dtype=np.float64).tolist()
    rules = np.asarray(rules, dtype=np.int64).tolist()
    centroids = list(centroids)
    out = np.empty(len(rows), dtype=np.float64)
    nv = len(lo)
    for m, row in enumerate(rows):
        degs = []
        for v in range(nv):
            x = min(max(row[v], lo[v]), hi[v])
            degs.append([membership(x, *p) for p in mf[v]])
        num = 0.0
        den = 0.0
        for r, rule in enumerate(rules):
            s = 1.0
            for v in range(nv):
                s *= degs[v][rule[v]]
            num += s * centroids[r]
            den += s
        out[m] = num / den if den > 0.0 else math.nan
    return out
