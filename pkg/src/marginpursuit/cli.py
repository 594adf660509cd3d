"""Command line entry point: ``marginpursuit {train,experiment,psi-table,solve-cubic}``."""
import argparse
import logging
import sys
import warnings

import numpy as np

from .calibration import psi_table
from .cubic import solve_cubic
from .data import SplitSpec, balanced_subsample, load_dataset, two_gaussians
from .harness import ExperimentConfig, fmt_float, run_experiment, write_trace
from .trainer import ALGORITHMS, MODES, TRACE_COLUMNS, TrainConfig, train


def _add_data_args(p):
    p.add_argument("--data", help="LIBSVM or CSV file (default: synthetic two-Gaussian data)")
    p.add_argument("--format", choices=("libsvm", "csv"))
    p.add_argument("--positive", help="positive-class rule: a label value, or '>0'")
    p.add_argument("--minmax", action="store_true", help="min-max scale each feature")
    p.add_argument("--n-train", type=int, default=200)
    p.add_argument("--synthetic-n", type=int, default=1000)
    p.add_argument("--synthetic-d", type=int, default=5)
    p.add_argument("--separation", type=float, default=5.0)


def _cmd_train(args):
    if args.data:
        full = load_dataset(args.data, args.format, args.positive, args.minmax)
    else:
        full = two_gaussians(args.synthetic_n, args.synthetic_d, args.separation, args.seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        tr, te = balanced_subsample(full, SplitSpec(args.n_train, seed=args.seed))
    T = args.T if args.T is not None else max(1, int(round(args.epochs * tr.n)))
    cfg = TrainConfig(
        s=args.s, gamma=args.gamma, k_bias=args.k_bias, step=args.step, lam=args.lam,
        T=T, seed=args.seed, mode=args.mode, algorithm=args.algorithm,
        rescale_at=args.rescale_at, delta=args.delta,
    )
    w, trace = train(tr, cfg, te)
    if args.out:
        write_trace(args.out, trace)
    else:
        out = sys.stdout
        out.write(",".join(TRACE_COLUMNS) + "\n")
        for r in trace.records:
            out.write(",".join([str(int(r.cost))] + [fmt_float(v) for v in r[1:]]) + "\n")
    if args.weights_out:
        np.savetxt(args.weights_out, w, fmt="%.17g")
    return 0


def _cmd_experiment(args):
    cfg = ExperimentConfig.from_file(
        args.config, seed=args.seed, out_dir=args.out, workers=args.workers, trials=args.trials,
    )
    res = run_experiment(cfg)
    for row in res["best"]:
        print(",".join(str(v) for v in row))
    return 0


def _cmd_psi_table(args):
    table = psi_table(args.s, args.gamma, args.K)
    table.to_csv(args.out if args.out else sys.stdout)
    return 0


def _cmd_solve_cubic(args):
    roots = solve_cubic((args.a, args.b, args.c, args.d))
    print("root,multiplicity")
    for r, m in roots.roots:
        print(f"{fmt_float(r)},{m}")
    print(f"# discriminant = {fmt_float(roots.discriminant)}", file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="marginpursuit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="single training run, trace CSV to stdout or --out")
    _add_data_args(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="margin_pursuit")
    p.add_argument("--mode", choices=MODES, default="stochastic")
    p.add_argument("--lam", type=float, default=1e-3)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--k-bias", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.1, help="fixed step (batch mode)")
    p.add_argument("--epochs", type=float, default=10.0)
    p.add_argument("--T", type=int, help="iterations; overrides --epochs")
    p.add_argument("--rescale-at", type=int)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--weights-out", help="write the final weight vector, one value per line")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("experiment", help="multi-trial sweep from a key = value config file")
    p.add_argument("config")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("psi-table", help="calibration transform table as CSV (u,psi)")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--K", type=int, default=2500)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_psi_table)

    p = sub.add_parser("solve-cubic", help="real roots of a*u^3 + b*u^2 + c*u + d")
    for name in "abcd":
        p.add_argument(name, type=float)
    p.set_defaults(func=_cmd_solve_cubic)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
