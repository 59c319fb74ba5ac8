"""Restarted k-means with k-means++ seeding.

The Lloyd loop runs in the compiled ``_kernels`` extension when it is
importable and in ``_lloyd_py`` otherwise.  Set ``MLCOCLUSTER_PURE=1`` to
force the fallback.  Both produce identical labels for identical inputs.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _lloyd_py
from .model import InvalidArgumentError
from .rng import substream

if os.environ.get("MLCOCLUSTER_PURE"):
    _lloyd = _lloyd_py.lloyd
    BACKEND = "python"
else:
    try:
        from ._kernels import lloyd as _lloyd

        BACKEND = "cython"
    except ImportError:  # extension not built
        _lloyd = _lloyd_py.lloyd
        BACKEND = "python"


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    restarts: int = 10
    max_iters: int = 100
    rel_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.restarts < 1 or self.max_iters < 1 or self.rel_tol < 0:
            raise InvalidArgumentError(f"invalid k-means configuration: {self}")


@dataclass(frozen=True)
class Labeling:
    labels: np.ndarray
    inertia: float


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Rename clusters in order of first appearance, so equal partitions get equal vectors."""
    labels = np.asarray(labels)
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first, kind="stable")
    mapping = np.empty(order.size, dtype=np.int64)
    mapping[order] = np.arange(order.size)
    return mapping[np.unique(labels, return_inverse=True)[1].ravel()]


def kmeans_plusplus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = _lloyd_py.sq_distances(points, centers[:1])[:, 0]
    for c in range(1, k):
        cum = np.cumsum(d2)
        total = cum[-1]
        if total > 0:
            idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        centers[c] = points[idx]
        d2 = np.minimum(d2, _lloyd_py.sq_distances(points, centers[c : c + 1])[:, 0])
    return centers


def lloyd(points: np.ndarray, centers: np.ndarray, max_iters: int = 100, rel_tol: float = 1e-6):
    """One Lloyd run from given centers on the active backend.

    Returns ``(labels, centers, inertia, n_iter, history)``.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    return _lloyd(points, np.ascontiguousarray(centers, dtype=np.float64), int(max_iters), float(rel_tol))


def kmeans(points: np.ndarray, cfg: KMeansConfig) -> Labeling:
    """Best-of-restarts Lloyd clustering of the rows of ``points``.

    Restart ``r`` seeds from ``(cfg.seed, r)``; the lowest inertia wins and
    ties go to the earlier restart.  Returned labels are canonical (first
    appearance order) and every cluster is non-empty.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise InvalidArgumentError("points must be a 2-d array")
    n = points.shape[0]
    if n < cfg.k:
        raise InvalidArgumentError(f"cannot form {cfg.k} clusters from {n} points")
    best = None
    for r in range(cfg.restarts):
        init = kmeans_plusplus(points, cfg.k, substream(cfg.seed, r))
        labels, _, inertia, _, _ = _lloyd(points, init, cfg.max_iters, cfg.rel_tol)
        if best is None or inertia < best[1]:
            best = (labels, inertia)
    return Labeling(canonical_labels(best[0]), float(best[1]))
