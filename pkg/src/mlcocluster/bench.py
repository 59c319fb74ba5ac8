"""Seeded Monte-Carlo experiments and real-network analyses.

Replicate ``r`` draws its parameters, network and k-means seeds from
``(master_seed, r, purpose)``, so grid points share random numbers
replicate-by-replicate and the output does not depend on how replicates are
scheduled across workers.
"""
from __future__ import annotations

import configparser
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from threadpoolctl import threadpool_limits

from . import rng as rngmod
from .detect import ALL_METHODS, CoClustering, MethodId, detect, run_all
from .kmeans import KMeansConfig
from .metrics import ari, clustering_error_onesided, evaluate, hamming_error, nmi
from .model import InvalidArgumentError, sample_network, sample_simulation_params

log = logging.getLogger(__name__)

METRICS = ("clustering_error", "hamming", "nmi", "ari")
METRIC_RANGES = {"clustering_error": (0.0, np.inf), "hamming": (0.0, 1.0), "nmi": (0.0, 1.0), "ari": (-1.0, 1.0)}
SWEEPABLE = ("rho", "n", "n_r", "n_c", "L")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "custom"
    n_r: int = 200
    n_c: int = 300
    L: int = 50
    K_r: int = 2
    K_c: int = 3
    rho: float = 0.1
    sweep: str = "rho"
    grid: tuple = (0.1,)
    replicates: int = 100
    master_seed: int = 0
    methods: tuple = ALL_METHODS
    kmeans: KMeansConfig = field(default_factory=lambda: KMeansConfig(k=1))

    def __post_init__(self):
        if self.sweep not in SWEEPABLE:
            raise InvalidArgumentError(f"sweep must be one of {SWEEPABLE}, got {self.sweep!r}")
        if len(self.grid) < 1:
            raise InvalidArgumentError("grid must hold at least one value")
        if self.replicates < 1:
            raise InvalidArgumentError("replicates must be >= 1")
        object.__setattr__(self, "methods", tuple(MethodId(m) for m in self.methods))
        object.__setattr__(self, "grid", tuple(self.grid))

    def point(self, value) -> dict:
        """Model dimensions at one grid value."""
        p = {"n_r": self.n_r, "n_c": self.n_c, "L": self.L, "rho": self.rho}
        if self.sweep == "n":
            p["n_r"] = p["n_c"] = int(value)
        elif self.sweep == "rho":
            p["rho"] = float(value)
        else:
            p[self.sweep] = int(value)
        return p


@dataclass(frozen=True)
class ResultRow:
    parameter: str
    value: float
    method: str
    metric: str
    mean: float
    std: float
    replicates: int


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    def get(self, value, method, metric) -> ResultRow:
        method = MethodId(method).value
        for r in self.rows:
            if r.value == value and r.method == method and r.metric == metric:
                return r
        raise KeyError((value, method, metric))

    def mean(self, value, method, metric="clustering_error") -> float:
        return self.get(value, method, metric).mean


def _grid(start, stop, step):
    return tuple(round(start + i * step, 10) for i in range(int(round((stop - start) / step)) + 1))


# full-scale settings; 100 replicates each
PRESETS: dict[str, ExperimentConfig] = {
    "exp1": ExperimentConfig("rho-sweep", 200, 300, 50, sweep="rho", grid=_grid(0.01, 0.1, 0.01)),
    "exp2": ExperimentConfig("n-sweep", 50, 50, 20, rho=0.1, sweep="n", grid=tuple(range(50, 501, 50))),
    "exp3": ExperimentConfig("L-sweep", 500, 600, 5, rho=0.1, sweep="L", grid=tuple(range(5, 51, 5))),
    # desk-scale counterparts used for acceptance, 50 replicates each
    "exp1-small": ExperimentConfig("rho-sweep", 100, 150, 25, sweep="rho", grid=(0.02, 0.1), replicates=50),
    "exp2-small": ExperimentConfig("n-sweep", 75, 75, 10, rho=0.1, sweep="n", grid=(75, 300), replicates=50),
    "exp3-small": ExperimentConfig("L-sweep", 100, 120, 2, rho=0.3, sweep="L", grid=(2, 20), replicates=50),
}


def _replicate(cfg: ExperimentConfig, value, rep: int) -> dict:
    """Metrics for every method at one (grid value, replicate)."""
    p = cfg.point(value)
    params = sample_simulation_params(
        p["n_r"], p["n_c"], cfg.K_r, cfg.K_c, p["L"], p["rho"], rngmod.substream(cfg.master_seed, rep, rngmod.PARAMS)
    )
    net = sample_network(params, rngmod.substream(cfg.master_seed, rep, rngmod.NETWORK))
    km = replace(cfg.kmeans, seed=rngmod.derive_seed(cfg.master_seed, rep, rngmod.KMEANS))
    out = {}
    for m in cfg.methods:
        est = detect(net, cfg.K_r, cfg.K_c, km, m)
        rep_metrics = evaluate(params, est, cfg.K_r, cfg.K_c)
        out[m] = {k: getattr(rep_metrics, k) for k in METRICS}
    return out


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ResultTable:
    """Run every (grid value, replicate) and aggregate mean/std per method and metric.

    A failing replicate is logged with its seed and excluded; the rest of the
    sweep continues.
    """
    jobs = [(gi, value, rep) for gi, value in enumerate(cfg.grid) for rep in range(cfg.replicates)]

    def one(job):
        _, value, rep = job
        try:
            return _replicate(cfg, value, rep)
        except Exception as exc:
            log.warning("replicate failed (value=%s, rep=%d, seed=%d): %s", value, rep, cfg.master_seed, exc)
            return exc

    # single-threaded BLAS keeps every decomposition bit-stable across worker counts
    with threadpool_limits(limits=1):
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(one, jobs))
        else:
            outcomes = [one(j) for j in jobs]

    table = ResultTable()
    for gi, value in enumerate(cfg.grid):
        per_point = [(job, out) for job, out in zip(jobs, outcomes) if job[0] == gi]
        ok = [out for _, out in per_point if not isinstance(out, Exception)]
        for job, out in per_point:
            if isinstance(out, Exception):
                table.failures.append({"value": value, "replicate": job[2], "seed": cfg.master_seed, "error": repr(out)})
        for m in cfg.methods:
            for metric in METRICS:
                vals = np.array([o[m][metric] for o in ok])
                if vals.size:
                    mean, std = float(np.mean(vals)), float(np.std(vals))
                else:
                    mean = std = float("nan")
                table.rows.append(ResultRow(cfg.sweep, value, m.value, metric, mean, std, int(vals.size)))
    return table


def load_config(path) -> ExperimentConfig:
    """Read an ``ExperimentConfig`` from a ``key = value`` file.

    Keys: ``preset`` (optional base), ``experiment``, ``n_r``, ``n_c``,
    ``L``, ``K_r``, ``K_c``, ``rho``, ``sweep``, ``grid`` (comma-separated),
    ``replicates``, ``master_seed``, ``methods`` (comma-separated names),
    ``kmeans_restarts``, ``kmeans_max_iters``, ``kmeans_rel_tol``.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    parser = configparser.ConfigParser(comment_prefixes=("#", ";"), inline_comment_prefixes=("#",))
    parser.optionxform = str
    parser.read_string("[experiment]\n" + text)
    kv = dict(parser["experiment"])
    return config_from_mapping(kv)


def config_from_mapping(kv: dict) -> ExperimentConfig:
    kv = dict(kv)
    base = PRESETS[kv.pop("preset")] if "preset" in kv else ExperimentConfig()
    ints = {"n_r", "n_c", "L", "K_r", "K_c", "replicates", "master_seed"}
    changes = {}
    km = base.kmeans
    for key, raw in kv.items():
        raw = str(raw).strip()
        if key in ints:
            changes[key] = int(raw)
        elif key == "rho":
            changes[key] = float(raw)
        elif key in ("experiment", "sweep"):
            changes[key] = raw
        elif key == "grid":
            changes[key] = tuple(float(x) if "." in x or "e" in x.lower() else int(x) for x in raw.split(","))
        elif key == "methods":
            changes[key] = tuple(MethodId.parse(x.strip()) for x in raw.split(","))
        elif key == "kmeans_restarts":
            km = replace(km, restarts=int(raw))
        elif key == "kmeans_max_iters":
            km = replace(km, max_iters=int(raw))
        elif key == "kmeans_rel_tol":
            km = replace(km, rel_tol=float(raw))
        else:
            raise InvalidArgumentError(f"unknown config key {key!r}")
    return replace(base, kmeans=km, **changes)


@dataclass(frozen=True)
class KSweepRow:
    K: int
    method: str
    clustering_error: float
    hamming: float
    nmi: float
    ari: float


def k_sweep(net, K_range, methods=(MethodId.NCDSOS,), cfg: KMeansConfig | None = None) -> list[KSweepRow]:
    """Disagreement between row and column clusterings as ``K = K_r = K_c`` varies.

    Row labels act as the reference for clustering and Hamming errors.
    Needs a square network (``n_r == n_c``), as for a directed network.
    """
    if net.n_r != net.n_c:
        raise InvalidArgumentError("k_sweep compares row and column labels node by node; need n_r == n_c")
    cfg = cfg or KMeansConfig(k=1)
    rows = []
    for K in K_range:
        if not 1 <= K <= min(net.n_r, net.n_c):
            raise InvalidArgumentError(f"K={K} outside [1, {min(net.n_r, net.n_c)}]")
        for m in methods:
            est = detect(net, K, K, cfg, MethodId(m))
            r, c = est.row_labels, est.col_labels
            rows.append(
                KSweepRow(
                    K,
                    MethodId(m).value,
                    clustering_error_onesided(r, c, K),
                    hamming_error(r, c, K),
                    nmi(r, c),
                    ari(r, c) if r.size > 1 else 1.0,
                )
            )
    return rows


def best_k_by_nmi(rows: list[KSweepRow], method=MethodId.NCDSOS) -> int:
    mine = [r for r in rows if r.method == MethodId(method).value]
    return max(mine, key=lambda r: (r.nmi, -r.K)).K


def pairwise_nmi(results: dict, side: str = "row") -> np.ndarray:
    """6x6 NMI matrix between the methods' labels, in ``MethodId`` order."""
    if side not in ("row", "col"):
        raise InvalidArgumentError(f"side must be 'row' or 'col', got {side!r}")
    results = {MethodId(k): v for k, v in results.items()}
    missing = [m.value for m in ALL_METHODS if m not in results]
    if missing:
        raise InvalidArgumentError(f"missing results for: {', '.join(missing)}")
    attr = "row_labels" if side == "row" else "col_labels"
    labels = [getattr(results[m], attr) for m in ALL_METHODS]
    k = len(labels)
    out = np.eye(k)
    for a in range(k):
        for b in range(a + 1, k):
            out[a, b] = out[b, a] = nmi(labels[a], labels[b])
    return out


def run_pairwise(net, K_r, K_c, cfg: KMeansConfig, workers: int = 1) -> tuple[dict[MethodId, CoClustering], np.ndarray, np.ndarray]:
    results = run_all(net, K_r, K_c, cfg, workers=workers)
    return results, pairwise_nmi(results, "row"), pairwise_nmi(results, "col")
