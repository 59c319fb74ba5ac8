"""Brute-force reference computations for tests.

Nothing here calls into the production modules (``grams``, ``metrics``,
``spectral``, ``kmeans``); the only shared code is the data containers.
Sizes are capped so the literal loops stay fast.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

MAX_NODES = 64
MAX_K = 6


class UnsupportedSizeError(ValueError):
    pass


class RankDeficient:
    """Marker returned when the full-rank case does not apply."""

    def __repr__(self):
        return "RankDeficient()"


SKIP = RankDeficient()


def naive_gram(net, side: str, debiased: bool) -> list[list[int]]:
    """Gram matrix by explicit summation over layers and shared neighbours."""
    layers = net.layers if hasattr(net, "layers") else np.asarray(net)
    L, n_r, n_c = layers.shape
    if n_r > MAX_NODES or n_c > MAX_NODES:
        raise UnsupportedSizeError(f"naive_gram supports at most {MAX_NODES} nodes per side")
    a = [[[int(x) for x in row] for row in layer] for layer in layers.tolist()]
    if side == "col":
        a = [[list(col) for col in zip(*layer)] for layer in a]
    n, m = len(a[0]) if a else 0, len(a[0][0]) if a and a[0] else 0
    s = [[0] * n for _ in range(n)]
    for layer in a:
        for i in range(n):
            ri = layer[i]
            for j in range(n):
                rj = layer[j]
                total = 0
                for k in range(m):
                    total += ri[k] * rj[k]
                s[i][j] += total
            if debiased:
                s[i][i] -= sum(ri)
    return s


def _perm_metric(t: list[int], e: list[int], K: int, which: str) -> float:
    n = len(t)
    best = math.inf
    for perm in itertools.permutations(range(K)):
        if which == "clustering":
            worst = 0.0
            for k in range(K):
                members = {i for i in range(n) if t[i] == k}
                est = {i for i in range(n) if e[i] == perm[k]}
                worst = max(worst, (len(members - est) + len(est - members)) / len(members))
            best = min(best, worst)
        else:
            # one-hot difference count ||Z_hat P - Z||_0, halved: misclassified nodes
            diff = 0
            for i in range(n):
                mapped = perm.index(e[i])
                diff += 0 if mapped == t[i] else 2
            best = min(best, diff / (2 * n))
    return best


def exhaustive_metric(true_labels, est_labels, K: int, which: str) -> float:
    """``which`` is ``"clustering"`` or ``"hamming"``; enumerates all K! permutations."""
    if K > MAX_K:
        raise UnsupportedSizeError(f"exhaustive_metric supports K <= {MAX_K}")
    t = [int(x) for x in true_labels]
    e = [int(x) for x in est_labels]
    if which not in ("clustering", "hamming"):
        raise ValueError(f"unknown metric {which!r}")
    return _perm_metric(t, e, K, which)


def entropy_nmi(a, b) -> float:
    """NMI from scratch with python floats (arithmetic-mean normalization)."""
    n = len(a)
    ca, cb, cab = {}, {}, {}
    for x, y in zip(a, b):
        ca[x] = ca.get(x, 0) + 1
        cb[y] = cb.get(y, 0) + 1
        cab[(x, y)] = cab.get((x, y), 0) + 1
    h = lambda counts: -sum(c / n * math.log(c / n) for c in counts.values())
    ha, hb = h(ca), h(cb)
    if ha + hb == 0:
        return 1.0
    mi = sum(c / n * math.log((c / n) / (ca[x] / n * cb[y] / n)) for (x, y), c in cab.items())
    return 2 * mi / (ha + hb)


def pair_count_ari(a, b) -> float:
    """ARI by counting every node pair directly."""
    n = len(a)
    both = only_a = only_b = 0
    for i in range(n):
        for j in range(i + 1, n):
            sa, sb = a[i] == a[j], b[i] == b[j]
            both += sa and sb
            only_a += sa and not sb
            only_b += sb and not sa
    pairs = n * (n - 1) // 2
    same_a, same_b = both + only_a, both + only_b
    expected = same_a * same_b / pairs
    max_index = (same_a + same_b) / 2
    if max_index == expected:
        return 1.0
    return (both - expected) / (max_index - expected)


def population_gram_loops(params, side: str) -> np.ndarray:
    """``sum_l Omega_l Omega_l'`` entry by entry from theta, labels and B."""
    gr = np.argmax(params.Z_r, axis=1)
    gc = np.argmax(params.Z_c, axis=1)
    tr, tc, B = params.theta_r, params.theta_c, params.B
    if side == "col":
        gr, gc, tr, tc = gc, gr, tc, tr
        B = B.transpose(0, 2, 1)
    n, m = len(tr), len(tc)
    s = np.zeros((n, n))
    for l in range(B.shape[0]):
        for i in range(n):
            for j in range(i, n):
                v = sum(tr[i] * B[l, gr[i], gc[k]] * tc[k] * tr[j] * B[l, gr[j], gc[k]] * tc[k] for k in range(m))
                s[i, j] += v
                if i != j:
                    s[j, i] += v
    return s


def eigvec_row_structure(params, side: str = "row"):
    """Distinct-row structure of the row-normalized top eigenvectors of the population gram.

    Returns ``(n_distinct, cross_distances)`` where ``cross_distances`` are
    the distances between normalized rows of nodes in different communities,
    or ``SKIP`` when the block Gram ``sum_l B_l B_l'`` (or ``B_l' B_l``) is
    rank deficient.
    """
    B = params.B if side == "row" else params.B.transpose(0, 2, 1)
    K = B.shape[1]
    bb = sum(b @ b.T for b in B)
    if np.linalg.matrix_rank(bb, tol=1e-10 * max(1.0, np.abs(bb).max())) < K:
        return SKIP
    omega_labels = np.argmax(params.Z_r if side == "row" else params.Z_c, axis=1)
    s = population_gram_loops(params, side)
    w, v = np.linalg.eig(s)  # general solver, independent of the symmetric path
    w, v = w.real, v.real
    top = np.argsort(-np.abs(w), kind="stable")[:K]
    u = v[:, top]
    u, _ = np.linalg.qr(u)  # orthonormalize in case eig returned a skewed basis
    u = u / np.linalg.norm(u, axis=1, keepdims=True)
    reps = []
    for row in u:
        if not any(np.linalg.norm(row - r) < 1e-8 for r in reps):
            reps.append(row)
    cross = [
        float(np.linalg.norm(u[i] - u[j]))
        for i in range(len(u))
        for j in range(i + 1, len(u))
        if omega_labels[i] != omega_labels[j]
    ]
    return len(reps), cross
