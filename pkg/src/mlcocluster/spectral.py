"""Top-k eigen/singular decompositions and row normalization of embeddings."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .model import InvalidArgumentError

ZERO_ROW_TOL = 1e-12
RANK_WARN_RATIO = 1e-8


class RankDeficiencyWarning(UserWarning):
    """The k-th retained eigenvalue is negligible next to the leading one."""


@dataclass(frozen=True)
class SpectralEmbedding:
    coords: np.ndarray  # (n, k)
    values: np.ndarray  # (k,), non-increasing in magnitude
    normalized: bool = False
    zero_rows: tuple[int, ...] = field(default=())

    @property
    def gap_ratio(self) -> float:
        """``|value_k| / |value_1|`` (0 when the leading value is 0)."""
        top = abs(self.values[0]) if self.values.size else 0.0
        return float(abs(self.values[-1]) / top) if top > 0 else 0.0


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Flip columns so each one's largest-magnitude entry is positive (lowest index on ties)."""
    if vecs.size == 0:
        return vecs
    return vecs * _signs(vecs)


def _signs(vecs: np.ndarray) -> np.ndarray:
    a = np.abs(vecs)
    # entries within round-off of the column maximum count as tied
    near_max = a >= a.max(axis=0) - 1e-12
    idx = np.argmax(near_max, axis=0)
    return np.where(vecs[idx, np.arange(vecs.shape[1])] < 0, -1.0, 1.0)


def _check_rank(values: np.ndarray, what: str) -> None:
    top = abs(values[0])
    if top == 0 or abs(values[-1]) / top < RANK_WARN_RATIO:
        warnings.warn(
            f"{what}: |lambda_k|/|lambda_1| below {RANK_WARN_RATIO:g}; embedding is rank deficient",
            RankDeficiencyWarning,
            stacklevel=3,
        )


def top_k_eig(m: np.ndarray, k: int, warn: bool = True) -> SpectralEmbedding:
    """Orthonormal eigenvectors of the ``k`` eigenvalues largest in magnitude.

    Equal magnitudes are ordered by value, descending.  A full dense
    decomposition is computed, then truncated.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgumentError("matrix must be square")
    n = m.shape[0]
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"need 1 <= k <= n, got k={k}, n={n}")
    scale = max(1.0, float(np.max(np.abs(m)))) if n else 1.0
    if np.max(np.abs(m - m.T)) > 1e-12 * scale:
        raise InvalidArgumentError("matrix is not symmetric")
    w, v = np.linalg.eigh(m)
    order = np.lexsort((-w, -np.abs(w)))[:k]
    values = w[order]
    vecs = _fix_signs(v[:, order])
    if warn:
        _check_rank(values, "top_k_eig")
    return SpectralEmbedding(np.ascontiguousarray(vecs), values)


def top_k_svd(m: np.ndarray, k: int, warn: bool = True) -> tuple[SpectralEmbedding, np.ndarray, SpectralEmbedding]:
    """Leading ``k`` singular triplets; left vectors get the sign convention, right ones follow."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise InvalidArgumentError("matrix must be 2-d")
    if not 1 <= k <= min(m.shape):
        raise InvalidArgumentError(f"need 1 <= k <= min(n_r, n_c), got k={k}, shape={m.shape}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    u = u[:, :k]
    v = vt[:k].T
    s = s[:k]
    signs = _signs(u)
    u = u * signs
    v = v * signs
    if warn:
        _check_rank(s, "top_k_svd")
    return SpectralEmbedding(np.ascontiguousarray(u), s), s, SpectralEmbedding(np.ascontiguousarray(v), s)


def row_normalize(emb: SpectralEmbedding) -> SpectralEmbedding:
    if emb.normalized:
        raise InvalidArgumentError("embedding is already row-normalized")
    norms = np.linalg.norm(emb.coords, axis=1)
    zero = norms < ZERO_ROW_TOL
    coords = np.zeros_like(emb.coords)
    keep = ~zero
    coords[keep] = emb.coords[keep] / norms[keep, None]
    return replace(emb, coords=coords, normalized=True, zero_rows=tuple(int(i) for i in np.flatnonzero(zero)))
