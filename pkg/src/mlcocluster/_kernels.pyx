# cython: language_level=3
"""Compiled Lloyd iterations; mirrors ``_lloyd_py`` operation for operation."""
import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


cdef void _assign(const double[:, ::1] X, const double[:, ::1] C, long long[::1] labels,
                  double[::1] dmin, long long[::1] counts) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = C.shape[0]
    cdef Py_ssize_t i, j, c, best_c, far
    cdef double acc, diff, best, far_d
    for c in range(k):
        counts[c] = 0
    for i in range(n):
        best = INFINITY
        best_c = 0
        for c in range(k):
            acc = 0.0
            for j in range(d):
                diff = X[i, j] - C[c, j]
                acc = acc + diff * diff
            if acc < best:
                best = acc
                best_c = c
        labels[i] = best_c
        dmin[i] = best
        counts[best_c] += 1
    for c in range(k):
        if counts[c] == 0:
            far = -1
            far_d = -1.0
            for i in range(n):
                if counts[labels[i]] > 1 and dmin[i] > far_d:
                    far_d = dmin[i]
                    far = i
            counts[labels[far]] -= 1
            labels[far] = c
            counts[c] = 1
            dmin[far] = 0.0


cdef void _update(const double[:, ::1] X, const long long[::1] labels, double[:, ::1] C,
                  long long[::1] counts) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = C.shape[0]
    cdef Py_ssize_t i, j, c
    for c in range(k):
        counts[c] = 0
        for j in range(d):
            C[c, j] = 0.0
    for j in range(d):
        for i in range(n):
            C[labels[i], j] = C[labels[i], j] + X[i, j]
    for i in range(n):
        counts[labels[i]] += 1
    for c in range(k):
        for j in range(d):
            C[c, j] = C[c, j] / <double>counts[c]


cdef double _cost(const double[:, ::1] X, const long long[::1] labels, const double[:, ::1] C,
                  double[::1] work) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j
    cdef double diff, total = 0.0
    for i in range(n):
        work[i] = 0.0
    for j in range(d):
        for i in range(n):
            diff = X[i, j] - C[labels[i], j]
            work[i] = work[i] + diff * diff
    for i in range(n):
        total = total + work[i]
    return total


def lloyd(points, centers, int max_iters, double rel_tol):
    """Same contract as ``mlcocluster._lloyd_py.lloyd``."""
    cdef const double[:, ::1] X = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[:, ::1] C = np.array(centers, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = X.shape[0], k = C.shape[0]
    labels_arr = np.empty(n, dtype=np.int64)
    new_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] labels = labels_arr
    cdef long long[::1] new = new_arr
    cdef double[::1] dmin = np.empty(n)
    cdef double[::1] work = np.empty(n)
    cdef long long[::1] counts = np.empty(k, dtype=np.int64)
    history_arr = np.empty(max_iters + 1)
    cdef double[::1] history = history_arr
    cdef int it, n_hist = 0
    cdef bint same, finished = False
    cdef double inertia = 0.0, prev = INFINITY
    cdef Py_ssize_t i
    with nogil:
        _assign(X, C, labels, dmin, counts)
        for it in range(max_iters):
            _update(X, labels, C, counts)
            inertia = _cost(X, labels, C, work)
            history[n_hist] = inertia
            n_hist += 1
            if it > 0 and prev - inertia <= rel_tol * prev:
                finished = True
                break
            prev = inertia
            _assign(X, C, new, dmin, counts)
            same = True
            for i in range(n):
                if new[i] != labels[i]:
                    same = False
                    break
            if same:
                finished = True
                break
            for i in range(n):
                labels[i] = new[i]
        if not finished:
            _update(X, labels, C, counts)
            inertia = _cost(X, labels, C, work)
            history[n_hist] = inertia
            n_hist += 1
    return labels_arr, np.asarray(C), inertia, n_hist, history_arr[:n_hist].copy()
