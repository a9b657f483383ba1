# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Same arithmetic, in the same order, as _pykernels."""

import numpy as np
cimport numpy as cnp

from libc.math cimport INFINITY, NAN

cnp.import_array()


cdef inline double membership(double x, double a, double b, double c, double d) noexcept nogil:
    if b <= x and x <= c:
        return 1.0
    if a < x and x < b:
        return (x - a) / (b - a)
    if c < x and x < d:
        return (d - x) / (d - c)
    return 0.0


def membership_py(double x, double a, double b, double c, double d):
    return membership(x, a, b, c, d)


cdef void _assign(const double[:, ::1] pts, double[:, ::1] cen,
                  cnp.int64_t[::1] labels) noexcept nogil:
    cdef Py_ssize_t n = pts.shape[0], k = cen.shape[0], i, j
    cdef Py_ssize_t best
    cdef double dx, dy, d, best_d
    for i in range(n):
        dx = pts[i, 0] - cen[0, 0]
        dy = pts[i, 1] - cen[0, 1]
        best = 0
        best_d = dx * dx + dy * dy
        for j in range(1, k):
            dx = pts[i, 0] - cen[j, 0]
            dy = pts[i, 1] - cen[j, 1]
            d = dx * dx + dy * dy
            if d < best_d:
                best_d = d
                best = j
        labels[i] = best


cdef void _repair_empty(const double[:, ::1] pts, double[:, ::1] cen,
                        cnp.int64_t[::1] labels, cnp.int64_t[::1] counts) noexcept nogil:
    cdef Py_ssize_t n = pts.shape[0], k = cen.shape[0], i, j, li, far
    cdef double dx, dy, d, far_d
    for j in range(k):
        if counts[j] != 0:
            continue
        far = -1
        far_d = -1.0
        for i in range(n):
            li = labels[i]
            if counts[li] <= 1:
                continue
            dx = pts[i, 0] - cen[li, 0]
            dy = pts[i, 1] - cen[li, 1]
            d = dx * dx + dy * dy
            if d > far_d:
                far_d = d
                far = i
        counts[labels[far]] -= 1
        labels[far] = j
        counts[j] = 1


cdef void _means(const double[:, ::1] pts, cnp.int64_t[::1] labels,
                 double[:, ::1] cen, cnp.int64_t[::1] counts) noexcept nogil:
    cdef Py_ssize_t n = pts.shape[0], k = cen.shape[0], i, j
    for j in range(k):
        cen[j, 0] = 0.0
        cen[j, 1] = 0.0
        counts[j] = 0
    for i in range(n):
        j = labels[i]
        cen[j, 0] += pts[i, 0]
        cen[j, 1] += pts[i, 1]
        counts[j] += 1
    for j in range(k):
        cen[j, 0] = cen[j, 0] / counts[j]
        cen[j, 1] = cen[j, 1] / counts[j]


cdef int _lloyd(const double[:, ::1] pts, double[:, ::1] cen, cnp.int64_t[::1] labels,
                cnp.int64_t[::1] new, cnp.int64_t[::1] counts, int max_iter) noexcept nogil:
    cdef Py_ssize_t n = pts.shape[0], k = cen.shape[0], i
    cdef int iterations = 0
    cdef bint same
    _assign(pts, cen, labels)
    while True:
        for i in range(k):
            counts[i] = 0
        for i in range(n):
            counts[labels[i]] += 1
        _repair_empty(pts, cen, labels, counts)
        _means(pts, labels, cen, counts)
        iterations += 1
        if iterations >= max_iter:
            break
        _assign(pts, cen, new)
        same = True
        for i in range(n):
            if new[i] != labels[i]:
                same = False
                break
        if same:
            break
        labels[:] = new
    return iterations


def lloyd(points, centers, int max_iter):
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[:, ::1] cen = np.array(centers, dtype=np.float64, order="C")
    cdef Py_ssize_t n = pts.shape[0], k = cen.shape[0]
    labels_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef cnp.int64_t[::1] new = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] counts = np.zeros(k, dtype=np.int64)
    cdef int iterations
    with nogil:
        iterations = _lloyd(pts, cen, labels, new, counts, max_iter)
    return labels_arr, np.asarray(cen), iterations


cdef void _seed(const double[:, ::1] pts, Py_ssize_t first, const double[::1] u,
                double[:, ::1] cen, double[::1] d2) noexcept nogil:
    cdef Py_ssize_t n = pts.shape[0], k = cen.shape[0], i, j, idx = first
    cdef double dx, dy, d, total, target, acc
    cen[0, 0] = pts[idx, 0]
    cen[0, 1] = pts[idx, 1]
    for i in range(n):
        dx = pts[i, 0] - pts[idx, 0]
        dy = pts[i, 1] - pts[idx, 1]
        d2[i] = dx * dx + dy * dy
    for j in range(1, k):
        total = 0.0
        for i in range(n):
            total += d2[i]
        if total > 0.0:
            target = u[j - 1] * total
            idx = n - 1
            acc = 0.0
            for i in range(n):
                acc += d2[i]
                if acc > target:
                    idx = i
                    break
        else:
            idx = <Py_ssize_t>(u[j - 1] * n)
            if idx > n - 1:
                idx = n - 1
        cen[j, 0] = pts[idx, 0]
        cen[j, 1] = pts[idx, 1]
        for i in range(n):
            dx = pts[i, 0] - pts[idx, 0]
            dy = pts[i, 1] - pts[idx, 1]
            d = dx * dx + dy * dy
            if d < d2[i]:
                d2[i] = d


cdef double _sse(const double[:, ::1] pts, cnp.int64_t[::1] labels, double[:, ::1] cen) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double dx, dy, total = 0.0
    for i in range(pts.shape[0]):
        j = labels[i]
        dx = pts[i, 0] - cen[j, 0]
        dy = pts[i, 1] - cen[j, 1]
        total += dx * dx + dy * dy
    return total


def kmeans_pp(points, Py_ssize_t first, uniforms):
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[::1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    out = np.empty((u.shape[0] + 1, 2), dtype=np.float64)
    cdef double[:, ::1] cen = out
    cdef double[::1] d2 = np.empty(pts.shape[0], dtype=np.float64)
    with nogil:
        _seed(pts, first, u, cen, d2)
    return out


def sse(points, labels, centers):
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.int64_t[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef double[:, ::1] cen = np.array(centers, dtype=np.float64, order="C")
    return _sse(pts, lab, cen)


def kmeans_restarts(points, firsts, uniforms, int max_iter):
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef const cnp.int64_t[::1] fst = np.ascontiguousarray(firsts, dtype=np.int64)
    cdef const double[:, ::1] u = np.ascontiguousarray(uniforms, dtype=np.float64).reshape(fst.shape[0], -1)
    cdef Py_ssize_t n = pts.shape[0], k = u.shape[1] + 1, r
    cdef double[:, ::1] cen = np.empty((k, 2), dtype=np.float64)
    cdef double[::1] d2 = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] labels = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] new = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] counts = np.zeros(k, dtype=np.int64)
    best_labels = np.zeros(n, dtype=np.int64)
    best_centers = np.zeros((k, 2), dtype=np.float64)
    cdef cnp.int64_t[::1] bl = best_labels
    cdef double[:, ::1] bc = best_centers
    cdef int iterations, best_iter = 0
    cdef double s, best_sse = INFINITY
    with nogil:
        for r in range(fst.shape[0]):
            _seed(pts, fst[r], u[r], cen, d2)
            iterations = _lloyd(pts, cen, labels, new, counts, max_iter)
            s = _sse(pts, labels, cen)
            if s < best_sse:
                best_sse = s
                best_iter = iterations
                bl[:] = labels
                bc[:, :] = cen
    return best_labels, best_centers, best_iter


def infer_batch(inputs, lo, hi, mf, rules, centroids):
    cdef const double[:, ::1] x = np.ascontiguousarray(inputs, dtype=np.float64)
    cdef const double[::1] vlo = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] vhi = np.ascontiguousarray(hi, dtype=np.float64)
    cdef const double[:, :, ::1] p = np.ascontiguousarray(mf, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] rl = np.ascontiguousarray(rules, dtype=np.int64)
    cdef const double[::1] cent = np.ascontiguousarray(centroids, dtype=np.float64)
    cdef Py_ssize_t m = x.shape[0], nv = x.shape[1], nl = p.shape[1], nr = rl.shape[0]
    cdef Py_ssize_t row, v, l, r
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    degs_arr = np.zeros((nv, nl), dtype=np.float64)
    cdef double[:, ::1] degs = degs_arr
    cdef double xv, s, num, den
    with nogil:
        for row in range(m):
            for v in range(nv):
                xv = x[row, v]
                if xv < vlo[v]:
                    xv = vlo[v]
                if xv > vhi[v]:
                    xv = vhi[v]
                for l in range(nl):
                    degs[v, l] = membership(xv, p[v, l, 0], p[v, l, 1], p[v, l, 2], p[v, l, 3])
            num = 0.0
            den = 0.0
            for r in range(nr):
                s = 1.0
                for v in range(nv):
                    s = s * degs[v, rl[r, v]]
                num = num + s * cent[r]
                den = den + s
            if den > 0.0:
                out[row] = num / den
            else:
                out[row] = NAN
    return out_arr
