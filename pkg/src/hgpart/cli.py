"""Command-line interface.

Subcommands: ``partition`` (one multilevel run), ``sweep`` (threshold grid),
``landscape`` (local-optima sampling + FDC fit), ``stats`` (AUC / Wilcoxon
over table columns), ``gen`` (synthetic planted hypergraph).  All tabular
output is comma-separated text with a header row; the exit status is
nonzero on any error.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from .coarsening import CoarseningConfig
from .core import parse_hmetis, write_hmetis, write_partition
from .driver import DriverConfig, partition
from .ea import EaConfig
from .landscape import export_landscape, fdc_fit, landscape_distances, sample_local_optima
from .pool import PoolConfig, format_log
from .stats import simpson_auc, wilcoxon
from .sweep import SweepSpec, default_threshold_grid, rows_to_csv, sweep
from .synthetic import SyntheticSpec, gen_synthetic


def _read_hypergraph(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hmetis(fh.read())


def _int_pair(text):
    parts = [int(t) for t in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated integers")
    return tuple(parts)


def _parse_thresholds(text):
    if text.startswith("grid:"):
        return default_threshold_grid(int(text.split(":", 1)[1]))
    return tuple(int(t) for t in text.split(","))


def _read_column(path, column):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise ValueError(f"column {column!r} not found in {path}")
        return [float(row[column]) for row in reader]


def _cmd_partition(args):
    hg = _read_hypergraph(args.input)
    ccfg = CoarseningConfig(t=args.threshold, adaptive=args.adaptive, k=args.k)
    ea = EaConfig(mu=args.mu, lam=args.lam, seed_multiplier=args.s,
                  epsilon=args.epsilon)
    pool = PoolConfig(r=args.r, epsilon=args.epsilon)
    cfg = DriverConfig(k=args.k, epsilon=args.epsilon, coarsening=ccfg,
                       initial=args.ip, budget=args.evals, ea=ea, pool=pool,
                       seed=args.seed)
    part, report = partition(hg, cfg)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(write_partition(part))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_kv_text())
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            fh.write(format_log(report.log))
    sys.stdout.write(report.to_kv_text())
    return 0


def _cmd_sweep(args):
    hg = _read_hypergraph(args.input)
    spec = SweepSpec(thresholds=_parse_thresholds(args.thresholds),
                     repetitions=args.reps, budget=args.budget,
                     algorithms=tuple(args.algorithms.split(",")),
                     epsilon=args.epsilon, adaptive=args.adaptive,
                     seed=args.seed, mu=args.mu, lam=args.lam,
                     seed_multiplier=args.s, pool_r=args.r)
    result = sweep(hg, spec)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(result.rows))
    lines = ["metric,key,value"]
    for alg, value in result.auc.items():
        lines.append(f"auc,{alg},{value:.6g}")
    for t, (stat, p) in result.wilcoxon_by_threshold.items():
        lines.append(f"wilcoxon_p,{t},{p:.6g}")
    summary = "\n".join(lines) + "\n"
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(summary)
    sys.stdout.write(summary)
    return 0


def _cmd_landscape(args):
    hg = _read_hypergraph(args.input)
    ccfg = CoarseningConfig(t=args.threshold, adaptive=args.adaptive)
    records = sample_local_optima(hg, ccfg, args.samples,
                                  np.random.default_rng(args.seed),
                                  epsilon=args.epsilon)
    distances = landscape_distances(records)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(export_landscape(records, distances))
    model = fdc_fit(records, distances)
    sys.stdout.write(
        f"samples={model.n_samples}\n"
        f"slope={model.slope:.6g}\n"
        f"r_squared={model.r_squared:.6g}\n"
        f"intercept_slope={model.intercept_slope:.6g}\n"
        f"intercept={model.intercept:.6g}\n"
        f"intercept_r_squared={model.intercept_r_squared:.6g}\n")
    return 0


def _cmd_stats(args):
    if args.kind == "auc":
        xs = _read_column(args.table, args.x)
        ys = _read_column(args.table, args.y)
        sys.stdout.write(f"auc={simpson_auc(xs, ys):.10g}\n")
    else:
        a = _read_column(args.table, args.a)
        b = _read_column(args.table, args.b)
        stat, p = wilcoxon(a, b, mode=args.mode)
        sys.stdout.write(f"statistic={stat:.10g}\np_value={p:.10g}\n")
    return 0


def _cmd_gen(args):
    spec = SyntheticSpec(vertex_count=args.vertices, block_sizes=args.blocks,
                         intra_edges=args.intra, cross_edges=args.cross,
                         cardinality=args.cardinality, epsilon=args.epsilon,
                         seed=args.seed)
    hg, planted, planted_cut = gen_synthetic(spec)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(write_hmetis(hg))
    if args.partition_out:
        with open(args.partition_out, "w", encoding="utf-8") as fh:
            fh.write(write_partition(planted))
    sys.stdout.write(f"vertices={hg.num_vertices}\nedges={hg.num_edges}\n"
                     f"planted_cut={planted_cut}\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hgpart",
        description="Multilevel hypergraph bipartitioning toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="run one multilevel partitioning")
    p.add_argument("input", help="hMetis hypergraph file")
    p.add_argument("-o", "--output", required=True, help="partition file to write")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--threshold", type=int, default=150)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--ip", choices=("pool", "ea"), default="ea")
    p.add_argument("--evals", type=int, default=1000)
    p.add_argument("--mu", type=int, default=100)
    p.add_argument("--lambda", dest="lam", type=int, default=1000)
    p.add_argument("--s", type=int, default=100, help="seeding multiplier")
    p.add_argument("--r", type=int, default=20, help="pool repetitions per member")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the key-value report here")
    p.add_argument("--log", help="write the evaluation log here")
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("sweep", help="threshold sweep with statistics")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="results table path")
    p.add_argument("--thresholds", required=True,
                   help="comma list (e.g. 150,500,1000) or grid:MAX")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--budget", type=int, default=30000)
    p.add_argument("--algorithms", default="pool,ea")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu", type=int, default=100)
    p.add_argument("--lambda", dest="lam", type=int, default=1000)
    p.add_argument("--s", type=int, default=100)
    p.add_argument("--r", type=int, default=20)
    p.add_argument("--summary", help="write the AUC/Wilcoxon summary here")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("landscape", help="sample local optima and fit FDC")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="dataset CSV path")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--threshold", type=int, default=150)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_landscape)

    p = sub.add_parser("stats", help="AUC or Wilcoxon over table columns")
    p.add_argument("kind", choices=("auc", "wilcoxon"))
    p.add_argument("--table", required=True, help="CSV file with a header row")
    p.add_argument("--x", help="abscissa column (auc)")
    p.add_argument("--y", help="value column (auc)")
    p.add_argument("--a", help="first sample column (wilcoxon)")
    p.add_argument("--b", help="second sample column (wilcoxon)")
    p.add_argument("--mode", choices=("rank-sum", "signed-rank"), default="rank-sum")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("gen", help="generate a planted synthetic hypergraph")
    p.add_argument("-o", "--output", required=True, help="hMetis file to write")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--blocks", type=_int_pair, required=True, help="e.g. 500,500")
    p.add_argument("--intra", type=int, required=True)
    p.add_argument("--cross", type=int, required=True)
    p.add_argument("--cardinality", type=_int_pair, default=(2, 4))
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--partition-out", help="also write the planted partition")
    p.set_defaults(func=_cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "stats":
        if args.kind == "auc" and (not args.x or not args.y):
            parser.error("stats auc requires --x and --y")
        if args.kind == "wilcoxon" and (not args.a or not args.b):
            parser.error("stats wilcoxon requires --a and --b")
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
