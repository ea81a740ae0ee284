"""Command-line interface.

Subcommands: fit, sample, coverage, qq, check-approx. Non-existence of the
MLE is a reported outcome (exit 0 with the existence flag in the report);
only usage and parse errors produce nonzero exit codes.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import __version__
from .approx_inverse import inverse_approximation_error
from .errors import ParseError
from .experiments import coverage_to_csv, qq_to_csv, run_coverage, run_qq
from .graph import prune_zero_degree
from .inference import infer
from .io import format_fit_report, parse_input, read_theta, write_dense, write_theta
from .likelihood import fisher_info
from .sampler import make_scenario, sample_graph
from .solver import FitConfig, fit

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3

_METHOD_ALIASES = {
    "exact": "newton_exact",
    "approx": "newton_approx",
    "fixed-point": "fixed_point",
}
_L_ALIASES = {"0": "zero", "zero": "zero", "loglog": "loglog", "sqrtlog": "sqrtlog", "log": "log"}


def _parse_l(value: str):
    if value in _L_ALIASES:
        return _L_ALIASES[value]
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--L must be one of 0|loglog|sqrtlog|log or a number, got {value!r}"
        )


def _parse_pairs(value: str) -> list[tuple[str, int, int]]:
    """Pairs like 'alpha:1,2;beta:100,101' with 1-based indices."""
    pairs = []
    for chunk in value.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            side_name, idx = chunk.split(":")
            i, j = (int(v) for v in idx.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad pair spec {chunk!r}")
        side = {"alpha": "event", "beta": "actor"}.get(side_name.strip())
        if side is None or i < 1 or j < 1:
            raise argparse.ArgumentTypeError(f"bad pair spec {chunk!r}")
        pairs.append((side, i - 1, j - 1))
    if not pairs:
        raise argparse.ArgumentTypeError("no pairs given")
    return pairs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affilfit",
        description="Fit and simulate the degree-parameterized affiliation network model.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit the model to a network file")
    p_fit.add_argument("--input", required=True)
    p_fit.add_argument("--format", choices=["edge_list", "dense_matrix"], default="edge_list")
    prune = p_fit.add_mutually_exclusive_group()
    prune.add_argument("--prune", dest="prune", action="store_true", default=True)
    prune.add_argument("--no-prune", dest="prune", action="store_false")
    p_fit.add_argument("--method", choices=list(_METHOD_ALIASES), default="approx")
    p_fit.add_argument("--tol", type=float, default=1e-8)
    p_fit.add_argument("--max-iter", type=int, default=200)
    p_fit.add_argument("--level", type=float, default=0.95)
    p_fit.add_argument("--out", default=None, help="report path (default: stdout)")

    p_sample = sub.add_parser("sample", help="draw a network from a ramp scenario")
    p_sample.add_argument("--m", type=int, required=True)
    p_sample.add_argument("--n", type=int, required=True)
    p_sample.add_argument("--L", type=_parse_l, default="zero")
    p_sample.add_argument("--theta-file", default=None, help="explicit parameters (JSON), overrides --L")
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--out", required=True, help="dense 0/1 CSV output")
    p_sample.add_argument("--theta-out", default=None, help="sidecar with the true parameters")

    for name, helptext in (
        ("coverage", "Monte-Carlo coverage of contrast confidence intervals"),
        ("qq", "QQ export of standardized contrasts"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--L", type=_parse_l, default="zero")
        p.add_argument("--pairs", type=_parse_pairs, default=[("event", 0, 1)])
        p.add_argument("--reps", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--method", choices=list(_METHOD_ALIASES), default="approx")
        p.add_argument("--out", required=True)

    p_check = sub.add_parser("check-approx", help="inverse approximation error across sizes")
    p_check.add_argument("--sizes", default="10,20,40,80", help="comma list of m=n sizes")
    p_check.add_argument("--L", type=_parse_l, default="zero")
    p_check.add_argument("--out", default=None)
    return parser


def _cmd_fit(args) -> int:
    try:
        g = parse_input(args.input, args.format)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    pruning = (0, 0)
    if args.prune:
        g, removed_e, removed_a = prune_zero_degree(g)
        pruning = (len(removed_e), len(removed_a))
    cfg = FitConfig(
        method=_METHOD_ALIASES[args.method], tol_score=args.tol, max_iter=args.max_iter
    )
    result = fit(g, cfg)
    inference = infer(result.theta_hat, args.level) if result.exists else None
    report = format_fit_report(g, result, inference, cfg, pruning)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    return EXIT_OK


def _cmd_sample(args) -> int:
    if args.theta_file:
        theta = read_theta(args.theta_file)
    else:
        theta = make_scenario(args.m, args.n, args.L).theta_star
    g = sample_graph(theta, args.seed)
    write_dense(g, args.out)
    if args.theta_out:
        write_theta(theta, args.theta_out)
    return EXIT_OK


def _cmd_coverage(args) -> int:
    scenario = make_scenario(args.m, args.n, args.L)
    cfg = FitConfig(method=_METHOD_ALIASES[args.method])
    report = run_coverage(
        scenario, args.pairs, args.reps, args.seed, cfg=cfg, threads=args.threads
    )
    coverage_to_csv(report, args.out)
    return EXIT_OK


def _cmd_qq(args) -> int:
    scenario = make_scenario(args.m, args.n, args.L)
    cfg = FitConfig(method=_METHOD_ALIASES[args.method])
    targets = [
        (("event_contrast" if side == "event" else "actor_contrast"), i, j)
        for side, i, j in args.pairs
    ]
    exports = run_qq(scenario, targets, args.reps, args.seed, cfg=cfg, threads=args.threads)
    if len(exports) == 1:
        qq_to_csv(exports[0], args.out)
    else:
        for export in exports:
            suffix = "_".join(str(i + 1) for i in export.indices)
            qq_to_csv(export, f"{args.out}.{export.kind}.{suffix}.csv")
    return EXIT_OK


def _cmd_check_approx(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = []
    for size in sizes:
        scenario = make_scenario(size, size, args.L)
        V = fisher_info(scenario.theta_star)
        err, ratio = inverse_approximation_error(V)
        rows.append((size, size, err, err * size * size, ratio))
    out = args.out
    lines = ["m,n,max_abs_err,err_times_mn,bound_ratio"]
    lines += [f"{m},{n},{e!r},{emn!r},{r!r}" for m, n, e, emn, r in rows]
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


_DISPATCH = {
    "fit": _cmd_fit,
    "sample": _cmd_sample,
    "coverage": _cmd_coverage,
    "qq": _cmd_qq,
    "check-approx": _cmd_check_approx,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return _DISPATCH[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
