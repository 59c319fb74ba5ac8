"""Pure-numpy Lloyd iterations.

Reference twin of ``_kernels.pyx``.  Every floating-point reduction here runs
in the same order as the compiled loop (sequential over features, then over
points) so both backends return bit-identical results.
"""
from __future__ import annotations

import numpy as np


def sq_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    n, d = points.shape
    acc = np.zeros((n, centers.shape[0]))
    for j in range(d):
        diff = points[:, j, None] - centers[None, :, j]
        acc += diff * diff
    return acc


def _assign(points, centers, k):
    dist = sq_distances(points, centers)
    labels = np.argmin(dist, axis=1)
    dmin = dist[np.arange(labels.size), labels]
    counts = np.bincount(labels, minlength=k)
    for c in range(k):
        if counts[c] == 0:
            # move the point farthest from its centroid, taken from a cluster that keeps a member
            movable = counts[labels] > 1
            i = int(np.argmax(np.where(movable, dmin, -1.0)))
            counts[labels[i]] -= 1
            labels[i] = c
            counts[c] = 1
            dmin[i] = 0.0
    return labels


def _update(points, labels, k):
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    centers = np.empty((k, points.shape[1]))
    for j in range(points.shape[1]):
        centers[:, j] = np.bincount(labels, weights=points[:, j], minlength=k) / counts
    return centers


def _cost(points, labels, centers) -> float:
    acc = np.zeros(points.shape[0])
    for j in range(points.shape[1]):
        diff = points[:, j] - centers[labels, j]
        acc += diff * diff
    return float(np.cumsum(acc)[-1]) if acc.size else 0.0


def lloyd(points: np.ndarray, centers: np.ndarray, max_iters: int, rel_tol: float):
    """Run Lloyd's algorithm from ``centers``.

    Returns ``(labels, centers, inertia, n_iter, history)`` where ``history``
    holds the inertia after each centroid update.
    """
    k = centers.shape[0]
    labels = _assign(points, centers, k)
    history = []
    prev = np.inf
    for it in range(max_iters):
        centers = _update(points, labels, k)
        inertia = _cost(points, labels, centers)
        history.append(inertia)
        if it > 0 and prev - inertia <= rel_tol * prev:
            break
        prev = inertia
        new = _assign(points, centers, k)
        if np.array_equal(new, labels):
            break
        labels = new
    else:
        centers = _update(points, labels, k)
        inertia = _cost(points, labels, centers)
        history.append(inertia)
    return labels.astype(np.int64), centers, inertia, len(history), np.asarray(history)
