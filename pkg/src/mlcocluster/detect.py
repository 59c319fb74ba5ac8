"""Spectral co-clustering detectors.

========  ==================================  ==============  ==========
method    embedding source                    vectors         row-normed
========  ==================================  ==============  ==========
NcDSoS    debiased grams S_r, S_c             top K_r / K_c   yes
NcSoS     raw grams sum A A', sum A'A         top K_r / K_c   yes
DSoG      debiased grams                      top K_r / K_c   no
SoG       raw grams                           top K_r / K_c   no
NcSum     sum of layers                       min(K_r, K_c)   yes
Sum       sum of layers                       min(K_r, K_c)   no
========  ==================================  ==============  ==========

Rows and columns are clustered independently.  Each method derives its
k-means seeds from ``(cfg.seed, method, side)``.
"""
from __future__ import annotations

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import grams
from .kmeans import KMeansConfig, kmeans
from .model import InvalidArgumentError, ModelParams, MultiLayerBipartiteNetwork, expected_adjacency
from .rng import derive_seed
from .spectral import SpectralEmbedding, row_normalize, top_k_eig, top_k_svd

log = logging.getLogger(__name__)


class MethodId(str, enum.Enum):
    NCDSOS = "NcDSoS"
    NCSOS = "NcSoS"
    NCSUM = "NcSum"
    SUM = "Sum"
    SOG = "SoG"
    DSOG = "DSoG"

    @classmethod
    def parse(cls, name: str) -> "MethodId":
        for m in cls:
            if m.value.lower() == name.lower() or m.name.lower() == name.lower():
                return m
        valid = ", ".join(m.value for m in cls)
        raise InvalidArgumentError(f"unknown method {name!r}; valid methods: {valid}")

    @property
    def index(self) -> int:
        return list(MethodId).index(self)


ALL_METHODS: tuple[MethodId, ...] = tuple(MethodId)

_GRAM_METHODS = {
    # method: (debiased, row-normalize)
    MethodId.NCDSOS: (True, True),
    MethodId.NCSOS: (False, True),
    MethodId.DSOG: (True, False),
    MethodId.SOG: (False, False),
}
_SUM_METHODS = {MethodId.NCSUM: True, MethodId.SUM: False}


@dataclass(frozen=True)
class CoClustering:
    row_labels: np.ndarray
    col_labels: np.ndarray
    method: MethodId | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def K_r(self) -> int:
        return int(self.row_labels.max()) + 1 if self.row_labels.size else 0

    @property
    def K_c(self) -> int:
        return int(self.col_labels.max()) + 1 if self.col_labels.size else 0


def _check_k(K_r: int, K_c: int, n_r: int, n_c: int) -> None:
    if not (1 <= K_r <= n_r and 1 <= K_c <= n_c):
        raise InvalidArgumentError(f"need 1 <= K_r <= {n_r} and 1 <= K_c <= {n_c}, got K_r={K_r}, K_c={K_c}")


def _side_seed(cfg: KMeansConfig, method: MethodId, side: int) -> int:
    return derive_seed(cfg.seed, method.index, side)


def _cluster(emb: SpectralEmbedding, k: int, normalize: bool, cfg: KMeansConfig, method: MethodId, side: int):
    null = emb.values == 0
    if null.any():
        # directions with an exactly-zero value carry no signal; drop the arbitrary LAPACK basis
        coords = emb.coords.copy()
        coords[:, null] = 0.0
        emb = replace(emb, coords=coords)
    if normalize:
        emb = row_normalize(emb)
    lab = kmeans(emb.coords, replace(cfg, k=k, seed=_side_seed(cfg, method, side)))
    return lab.labels, emb


def cocluster_from_grams(
    row_gram: np.ndarray,
    col_gram: np.ndarray,
    K_r: int,
    K_c: int,
    cfg: KMeansConfig,
    normalize: bool = True,
    method: MethodId = MethodId.NCDSOS,
) -> CoClustering:
    """Cluster rows/columns from the top eigenvectors of two given symmetric matrices."""
    _check_k(K_r, K_c, row_gram.shape[0], col_gram.shape[0])
    row_labels, row_emb = _cluster(top_k_eig(row_gram, K_r), K_r, normalize, cfg, method, 0)
    col_labels, col_emb = _cluster(top_k_eig(col_gram, K_c), K_c, normalize, cfg, method, 1)
    return CoClustering(row_labels, col_labels, method, _diagnostics(row_emb, col_emb))


def cocluster_from_matrix(
    m: np.ndarray, K_r: int, K_c: int, cfg: KMeansConfig, normalize: bool = True, method: MethodId = MethodId.NCSUM
) -> CoClustering:
    """Cluster rows/columns from the top ``min(K_r, K_c)`` singular vectors of ``m``."""
    _check_k(K_r, K_c, m.shape[0], m.shape[1])
    k = min(K_r, K_c)
    left, _, right = top_k_svd(m, k)
    row_labels, row_emb = _cluster(left, K_r, normalize, cfg, method, 0)
    col_labels, col_emb = _cluster(right, K_c, normalize, cfg, method, 1)
    return CoClustering(row_labels, col_labels, method, _diagnostics(row_emb, col_emb))


def _diagnostics(row_emb: SpectralEmbedding, col_emb: SpectralEmbedding) -> dict:
    return {
        "row_zero_rows": len(row_emb.zero_rows),
        "col_zero_rows": len(col_emb.zero_rows),
        "row_gap_ratio": row_emb.gap_ratio,
        "col_gap_ratio": col_emb.gap_ratio,
    }


def detect(net: MultiLayerBipartiteNetwork, K_r: int, K_c: int, cfg: KMeansConfig, method: MethodId) -> CoClustering:
    method = MethodId(method)
    if method in _GRAM_METHODS:
        debiased, normalize = _GRAM_METHODS[method]
        return cocluster_from_grams(
            grams.gram(net, "row", debiased).values,
            grams.gram(net, "col", debiased).values,
            K_r,
            K_c,
            cfg,
            normalize,
            method,
        )
    return cocluster_from_matrix(grams.layer_sum(net), K_r, K_c, cfg, _SUM_METHODS[method], method)


def ncdsos(net, K_r, K_c, cfg):
    """Row-normalized top eigenvectors of the debiased grams, then k-means."""
    return detect(net, K_r, K_c, cfg, MethodId.NCDSOS)


def ncsos(net, K_r, K_c, cfg):
    return detect(net, K_r, K_c, cfg, MethodId.NCSOS)


def ncsum(net, K_r, K_c, cfg):
    return detect(net, K_r, K_c, cfg, MethodId.NCSUM)


def sum_method(net, K_r, K_c, cfg):
    return detect(net, K_r, K_c, cfg, MethodId.SUM)


def sog(net, K_r, K_c, cfg):
    return detect(net, K_r, K_c, cfg, MethodId.SOG)


def dsog(net, K_r, K_c, cfg):
    return detect(net, K_r, K_c, cfg, MethodId.DSOG)


def detect_population(params: ModelParams, cfg: KMeansConfig, method: MethodId = MethodId.NCDSOS) -> CoClustering:
    """Run ``method`` on noiseless inputs: population grams, or the sum of expected layers."""
    method = MethodId(method)
    if method in _GRAM_METHODS:
        _, normalize = _GRAM_METHODS[method]
        return cocluster_from_grams(
            grams.population_gram(params, "row").values,
            grams.population_gram(params, "col").values,
            params.K_r,
            params.K_c,
            cfg,
            normalize,
            method,
        )
    omega_sum = expected_adjacency(params).omega.sum(axis=0)
    return cocluster_from_matrix(omega_sum, params.K_r, params.K_c, cfg, _SUM_METHODS[method], method)


def run_all(
    net: MultiLayerBipartiteNetwork,
    K_r: int,
    K_c: int,
    cfg: KMeansConfig,
    methods=ALL_METHODS,
    failures: dict | None = None,
    workers: int = 1,
) -> dict[MethodId, CoClustering]:
    """Run every method in ``methods``.

    A failing method is logged and left out of the result; if ``failures`` is
    given, its exception is stored there under the method id.
    """
    methods = [MethodId(m) for m in methods]

    def one(m):
        try:
            return detect(net, K_r, K_c, cfg, m)
        except Exception as exc:  # keep the batch going
            log.warning("method %s failed: %s", m.value, exc)
            return exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, methods))
    else:
        outcomes = [one(m) for m in methods]
    results = {}
    for m, out in zip(methods, outcomes):
        if isinstance(out, Exception):
            if failures is not None:
                failures[m] = out
        else:
            results[m] = out
    return results
