"""Partition comparison metrics.

``clustering_error_onesided``
    min over label permutations of the max over true communities of the
    two-sided misassignment count divided by that community's size.
``hamming_error``
    misclassified-node fraction under the best permutation.
``nmi``
    ``2 I(a; b) / (H(a) + H(b))``, natural logs.
``ari``
    Hubert-Arabie adjusted Rand index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import comb

from .model import InvalidArgumentError

MAX_EXACT_K = 10


class UnsupportedSizeError(InvalidArgumentError):
    """Exact search requested beyond its size cap."""


@dataclass(frozen=True)
class MetricsReport:
    f_r: float
    f_c: float
    clustering_error: float
    hamming: float
    nmi: float
    ari: float

    def as_dict(self) -> dict[str, float]:
        return {
            "f_r": self.f_r,
            "f_c": self.f_c,
            "clustering_error": self.clustering_error,
            "hamming": self.hamming,
            "nmi": self.nmi,
            "ari": self.ari,
        }


@dataclass(frozen=True)
class Alignment:
    permutation: tuple[int, ...]  # true community -> estimated community
    objective: float


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.int64).ravel()
    b = np.asarray(b, dtype=np.int64).ravel()
    if a.shape != b.shape:
        raise InvalidArgumentError(f"label vectors differ in length: {a.size} vs {b.size}")
    if a.size and (a.min() < 0 or b.min() < 0):
        raise InvalidArgumentError("labels must be non-negative")
    return a, b


def confusion(true_labels, est_labels, K: int | None = None) -> np.ndarray:
    """Square count matrix ``C[t, e]``, padded to cover every label present."""
    t, e = _pair(true_labels, est_labels)
    size = max(K or 0, int(t.max(initial=-1)) + 1, int(e.max(initial=-1)) + 1)
    c = np.zeros((size, size), dtype=np.int64)
    np.add.at(c, (t, e), 1)
    return c


def clustering_alignment(true_labels, est_labels, K: int) -> Alignment:
    """Exact minimizer of the per-community bottleneck misassignment.

    This is a bottleneck (min-max) assignment, so a depth-first search with
    pruning replaces the sum-based Hungarian method.
    """
    c = confusion(true_labels, est_labels, K)
    size = c.shape[0]
    if size > MAX_EXACT_K:
        raise UnsupportedSizeError(f"exact permutation search supports K <= {MAX_EXACT_K}, got {size}")
    n_true = c.sum(axis=1)
    if np.any(n_true[:K] == 0):
        raise InvalidArgumentError("every true community must be non-empty")
    n_est = c.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        # cost[t, e]: nodes of t outside e plus nodes of e outside t, over |t|
        cost = (n_true[:, None] + n_est[None, :] - 2 * c) / n_true[:, None]
    # padded true rows (no members) cannot raise the max
    cost[n_true == 0] = 0.0
    # visit the most constrained communities first for tighter pruning
    rows = sorted(range(size), key=lambda r: -cost[r].min())
    best = [np.inf, None]
    perm = [0] * size
    used = [False] * size

    def search(depth: int, worst: float) -> None:
        if worst >= best[0]:
            return
        if depth == size:
            best[0] = worst
            best[1] = tuple(perm)
            return
        r = rows[depth]
        for e in np.argsort(cost[r], kind="stable"):
            if not used[e]:
                used[e] = True
                perm[r] = int(e)
                search(depth + 1, max(worst, cost[r, e]))
                used[e] = False

    search(0, -np.inf)
    return Alignment(best[1], float(best[0]))


def clustering_error_onesided(true_labels, est_labels, K: int) -> float:
    return clustering_alignment(true_labels, est_labels, K).objective


def hamming_alignment(true_labels, est_labels, K: int | None = None) -> Alignment:
    c = confusion(true_labels, est_labels, K)
    n = int(c.sum())
    t_idx, e_idx = linear_sum_assignment(c, maximize=True)
    matched = int(c[t_idx, e_idx].sum())
    perm = tuple(int(e) for _, e in sorted(zip(t_idx, e_idx)))
    return Alignment(perm, (n - matched) / n if n else 0.0)


def hamming_error(true_labels, est_labels, K: int | None = None) -> float:
    """Fraction of nodes misclassified under the best one-to-one label matching."""
    return hamming_alignment(true_labels, est_labels, K).objective


def _xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=np.float64)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def nmi(a, b) -> float:
    a, b = _pair(a, b)
    n = a.size
    if n == 0:
        raise InvalidArgumentError("need at least one node")
    _, a = np.unique(a, return_inverse=True)
    _, b = np.unique(b, return_inverse=True)
    c = np.zeros((a.max() + 1, b.max() + 1))
    np.add.at(c, (a, b), 1)
    p = c / n
    pa = p.sum(axis=1)
    pb = p.sum(axis=0)
    h_a = -_xlogx(pa).sum()
    h_b = -_xlogx(pb).sum()
    if h_a + h_b == 0 or _same_partition(a, b):
        return 1.0
    nz = p > 0
    mi = float(np.sum(p[nz] * np.log(p[nz] / np.outer(pa, pb)[nz])))
    return float(np.clip(2.0 * mi / (h_a + h_b), 0.0, 1.0))


def ari(a, b) -> float:
    a, b = _pair(a, b)
    n = a.size
    if n < 2:
        raise InvalidArgumentError("ARI needs at least two nodes")
    _, a = np.unique(a, return_inverse=True)
    _, b = np.unique(b, return_inverse=True)
    c = np.zeros((a.max() + 1, b.max() + 1), dtype=np.int64)
    np.add.at(c, (a, b), 1)
    sum_ij = comb(c, 2).sum()
    sum_a = comb(c.sum(axis=1), 2).sum()
    sum_b = comb(c.sum(axis=0), 2).sum()
    expected = sum_a * sum_b / comb(n, 2)
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        # degenerate denominator: only identical partitions reach it in practice
        return 1.0 if _same_partition(a, b) else 0.0
    return float((sum_ij - expected) / (max_index - expected))


def _same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    pairs = np.unique(np.stack([a, b]), axis=1)
    return pairs.shape[1] == np.unique(a).size == np.unique(b).size


def _labels(x, attr):
    return np.asarray(getattr(x, attr), dtype=np.int64)


def evaluate(truth, est, K_r: int | None = None, K_c: int | None = None) -> MetricsReport:
    """Compare two co-clusterings (anything with ``row_labels``/``col_labels``).

    Hamming takes the worse side; NMI and ARI take the worse (smaller) side.
    """
    tr, er = _labels(truth, "row_labels"), _labels(est, "row_labels")
    tc, ec = _labels(truth, "col_labels"), _labels(est, "col_labels")
    K_r = K_r if K_r is not None else int(tr.max()) + 1
    K_c = K_c if K_c is not None else int(tc.max()) + 1
    f_r = clustering_error_onesided(tr, er, K_r)
    f_c = clustering_error_onesided(tc, ec, K_c)
    return MetricsReport(
        f_r=f_r,
        f_c=f_c,
        clustering_error=max(f_r, f_c),
        hamming=max(hamming_error(tr, er, K_r), hamming_error(tc, ec, K_c)),
        nmi=min(nmi(tr, er), nmi(tc, ec)),
        ari=min(ari(tr, er), ari(tc, ec)),
    )
