"""Command-line interface: ``mlcocluster <subcommand> ...``.

Errors are written to stderr prefixed with ``mlcocluster: error:`` and the
process exits non-zero.  The default seed comes from ``$MLCOCLUSTER_SEED``
(0 when unset).
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import bench, netio
from .detect import ALL_METHODS, CoClustering, MethodId, detect, detect_population, run_all
from .kmeans import KMeansConfig
from .metrics import evaluate
from .model import sample_network, sample_simulation_params
from .rng import NETWORK, PARAMS, SEED_ENV_VAR, default_seed, substream

PROG = "mlcocluster"


class CliError(Exception):
    pass


def _out_dir(args) -> Path:
    out = Path(args.out or args.output or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _kmeans_cfg(args) -> KMeansConfig:
    return KMeansConfig(k=1, restarts=args.restarts, seed=args.seed)


def cmd_simulate(args) -> int:
    if not 0 < args.rho <= 1:
        raise CliError(f"--rho must lie in (0, 1], got {args.rho}")
    params = sample_simulation_params(
        args.nr, args.nc, args.kr, args.kc, args.layers, args.rho, substream(args.seed, 0, PARAMS)
    )
    net = sample_network(params, substream(args.seed, 0, NETWORK))
    out = _out_dir(args)
    netio.save_multiplex_edgelist(out / "network.edges", net)
    netio.write_labels(out / "truth.csv", CoClustering(params.row_labels, params.col_labels))
    netio.save_params(out / "params.json", params)
    print(f"n_r={net.n_r} n_c={net.n_c} K_r={params.K_r} K_c={params.K_c} L={net.L} rho={args.rho} seed={args.seed}")
    print(f"edges={net.edge_count()} density={net.edge_count() / max(1, net.L * net.n_r * net.n_c):.6g}")
    print(f"wrote {out / 'network.edges'}, {out / 'truth.csv'}, {out / 'params.json'}")
    return 0


def _print_diag(res: CoClustering) -> None:
    d = res.diagnostics
    print(
        f"{res.method.value}: row_gap_ratio={d.get('row_gap_ratio', float('nan')):.6g} "
        f"col_gap_ratio={d.get('col_gap_ratio', float('nan')):.6g} "
        f"row_zero_rows={d.get('row_zero_rows', 0)} col_zero_rows={d.get('col_zero_rows', 0)}"
    )


def cmd_detect(args) -> int:
    cfg = _kmeans_cfg(args)
    out = _out_dir(args)
    if args.method.lower() == "all":
        methods = list(ALL_METHODS)
    else:
        methods = [MethodId.parse(args.method)]
    if args.oracle:
        params = netio.load_params(args.oracle)
        results = {m: detect_population(params, cfg, m) for m in methods}
    else:
        if not args.network:
            raise CliError("--network is required unless --oracle is given")
        net = netio.load_multiplex_edgelist(args.network)
        if len(methods) > 1:
            failures = {}
            results = run_all(net, args.kr, args.kc, cfg, methods, failures=failures, workers=args.threads)
            for m, exc in failures.items():
                print(f"{PROG}: error: {m.value} failed: {exc}", file=sys.stderr)
        else:
            results = {methods[0]: detect(net, args.kr, args.kc, cfg, methods[0])}
    for m, res in results.items():
        path = out / f"labels_{m.value}.csv"
        netio.write_labels(path, res)
        _print_diag(res)
        print(f"wrote {path}")
    return 0 if len(results) == len(methods) else 1


def cmd_eval(args) -> int:
    tr, tc = netio.load_labels(args.truth, args.kr, args.kc)
    er, ec = netio.load_labels(args.est, args.kr, args.kc)
    truth = CoClustering(tr, tc)
    est = CoClustering(er, ec)
    rep = evaluate(truth, est, args.kr, args.kc)
    for k, v in rep.as_dict().items():
        print(f"{k}={v:.6g}")
    if args.output:
        out = Path(args.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        netio.write_table_csv(out, list(rep.as_dict()), [list(rep.as_dict().values())])
    return 0


def cmd_bench(args) -> int:
    if args.config:
        cfg = bench.load_config(args.config)
    elif args.preset:
        cfg = bench.PRESETS[args.preset]
    else:
        raise CliError("give --config or --preset")
    if args.seed_given:
        cfg = replace(cfg, master_seed=args.seed)
    if args.replicates:
        cfg = replace(cfg, replicates=args.replicates)
    table = bench.run_experiment(cfg, workers=args.threads)
    out = Path(args.output or "results.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    netio.write_results_csv(out, table)
    print(f"wrote {len(table.rows)} rows to {out}; failed replicates: {len(table.failures)}")
    return 0


def cmd_ksweep(args) -> int:
    net = netio.load_multiplex_edgelist(args.network)
    methods = list(ALL_METHODS) if args.method.lower() == "all" else [MethodId.parse(args.method)]
    rows = bench.k_sweep(net, range(args.kmin, args.kmax + 1), methods, _kmeans_cfg(args))
    header = ["K", "method", "clustering_error", "hamming", "nmi", "ari"]
    table = [[r.K, r.method, r.clustering_error, r.hamming, r.nmi, r.ari] for r in rows]
    if args.output:
        netio.write_table_csv(args.output, header, table)
    print(",".join(header))
    for row in table:
        print(",".join(netio._fmt(x) for x in row))
    for m in methods:
        print(f"best K by NMI ({m.value}): {bench.best_k_by_nmi(rows, m)}")
    return 0


def cmd_degrees(args) -> int:
    net = netio.load_multiplex_edgelist(args.network)
    prof = netio.degree_profile(net)
    out = Path(args.output or "degrees.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    netio.write_degree_csv(out, prof)
    for l in range(net.L):
        print(f"layer {l + 1}: edges={int(prof.out_degrees[l].sum())}")
    print(f"total edges={int(prof.out_degrees.sum())}")
    return 0


def cmd_pairwise(args) -> int:
    net = netio.load_multiplex_edgelist(args.network)
    _, row_m, col_m = bench.run_pairwise(net, args.kr, args.kc, _kmeans_cfg(args), workers=args.threads)
    names = [m.value for m in ALL_METHODS]
    out = Path(args.output or ".")
    out.mkdir(parents=True, exist_ok=True)
    for side, mat in (("row", row_m), ("col", col_m)):
        path = out / f"pairwise_nmi_{side}.csv"
        netio.write_table_csv(path, ["method", *names], [[n, *mat[i]] for i, n in enumerate(names)])
        print(f"{side}:")
        for i, n in enumerate(names):
            print(f"  {n:>7} " + " ".join(f"{x:.3f}" for x in mat[i]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=None, help=f"master seed (default: ${SEED_ENV_VAR} or 0)"
    )
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads")
    common.add_argument("--output", default=None, help="output file or directory")
    common.add_argument("--restarts", type=int, default=10, help="k-means restarts")

    p = argparse.ArgumentParser(prog=PROG, description="Spectral co-clustering of multi-layer bipartite networks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="sample a network from random model parameters")
    s.add_argument("--nr", type=int, required=True)
    s.add_argument("--nc", type=int, required=True)
    s.add_argument("--kr", type=int, default=2)
    s.add_argument("--kc", type=int, default=3)
    s.add_argument("--layers", type=int, required=True)
    s.add_argument("--rho", type=float, required=True)
    s.add_argument("--out", default=None, help="output directory")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("detect", parents=[common], help="estimate row and column communities")
    s.add_argument("--network")
    s.add_argument("--kr", type=int)
    s.add_argument("--kc", type=int)
    s.add_argument("--method", default="NcDSoS", help="one of %s, or 'all'" % ", ".join(m.value for m in MethodId))
    s.add_argument("--oracle", metavar="PARAMS_JSON", help="run on population matrices built from a params file")
    s.add_argument("--out", default=None, help="output directory")
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("eval", parents=[common], help="compare estimated labels with ground truth")
    s.add_argument("--truth", required=True)
    s.add_argument("--est", required=True)
    s.add_argument("--kr", type=int)
    s.add_argument("--kc", type=int)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("bench", parents=[common], help="run a simulation experiment")
    s.add_argument("--config")
    s.add_argument("--preset", choices=sorted(bench.PRESETS))
    s.add_argument("--replicates", type=int, default=None, help="override the replicate count")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("ksweep", parents=[common], help="row/column disagreement as K varies")
    s.add_argument("--network", required=True)
    s.add_argument("--kmin", type=int, default=2)
    s.add_argument("--kmax", type=int, default=6)
    s.add_argument("--method", default="NcDSoS")
    s.set_defaults(func=cmd_ksweep)

    s = sub.add_parser("degrees", parents=[common], help="per-layer out/in degrees")
    s.add_argument("--network", required=True)
    s.set_defaults(func=cmd_degrees)

    s = sub.add_parser("pairwise-nmi", parents=[common], help="NMI between all six methods")
    s.add_argument("--network", required=True)
    s.add_argument("--kr", type=int, required=True)
    s.add_argument("--kc", type=int, required=True)
    s.set_defaults(func=cmd_pairwise)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = default_seed()
    if args.command == "detect" and not args.oracle and (args.kr is None or args.kc is None):
        parser.error("detect needs --kr and --kc")
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
