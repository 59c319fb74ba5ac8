"""Compiled vs pure-numpy Lloyd backend.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the bare Lloyd loop on embedding-shaped inputs, then a full NcDSoS
detection with each backend swapped in, and checks the labels agree.
"""
import argparse
import time

import numpy as np

import mlcocluster.kmeans as km
from mlcocluster import _lloyd_py
from mlcocluster.detect import MethodId, detect
from mlcocluster.kmeans import KMeansConfig, kmeans_plusplus
from mlcocluster.model import sample_network, sample_simulation_params
from mlcocluster.rng import substream



def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        from mlcocluster import _kernels
    except ImportError:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    print(f"{'case':<28}{'python [ms]':>12}{'cython [ms]':>12}{'speedup':>9}")
    rng = np.random.default_rng(0)
    for n, d, k in ((200, 2, 2), (600, 3, 3), (2000, 3, 3), (2000, 6, 6)):
        # normalized-embedding-like input: points on the unit sphere around k directions
        dirs = rng.standard_normal((k, d))
        pts = dirs[rng.integers(0, k, n)] + 0.3 * rng.standard_normal((n, d))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        init = kmeans_plusplus(pts, k, substream(1))
        tp, a = best_of(lambda: _lloyd_py.lloyd(pts, init, 100, 1e-6), args.repeat)
        tc, b = best_of(lambda: _kernels.lloyd(pts, init, 100, 1e-6), args.repeat)
        assert np.array_equal(a[0], b[0]) and a[2] == b[2]
        print(f"{f'lloyd n={n} d={d} k={k}':<28}{tp * 1e3:>12.2f}{tc * 1e3:>12.2f}{tp / tc:>9.1f}")

    p = sample_simulation_params(500, 600, 2, 3, 20, 0.1, substream(3))
    net = sample_network(p, substream(3, 1))
    cfg = KMeansConfig(k=1, seed=5)
    results = {}
    for name, fn in (("python", _lloyd_py.lloyd), ("cython", _kernels.lloyd)):
        saved = km._lloyd
        km._lloyd = fn
        try:
            results[name] = best_of(lambda: detect(net, 2, 3, cfg, MethodId.NCDSOS), args.repeat)
        finally:
            km._lloyd = saved
    (tp, a), (tc, b) = results["python"], results["cython"]
    assert np.array_equal(a.row_labels, b.row_labels) and np.array_equal(a.col_labels, b.col_labels)
    print(f"{'NcDSoS 500x600, L=20':<28}{tp * 1e3:>12.2f}{tc * 1e3:>12.2f}{tp / tc:>9.1f}")


if __name__ == "__main__":
    main()
