"""``ptail`` command line.

Exit codes: 0 success, 2 usage or config error, 3 data error, 4 numeric error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .config import PRESETS, ConfigError, build_sweep, load_config_file, resolve_seed
from .coverage import format_table, run_coverage
from .curve import DEFAULT_LEVEL, DEFAULT_QUANTILE, build_curve, default_method, implied_alpha
from .distributions import parse_distribution
from .ingest import DataError, IngestSpec, curve_csv, curve_json, fmt, load_sample
from .rng import RngStream
from .svg import render_svg
from .tail_math import invert_tail_value, pareto_tail_value
from .ustat import InsufficientExceedancesError, tail_estimate
from .variance import KINDS, VarianceMethod, confidence_interval

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4
FORMATS = ("csv", "json", "svg")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _num(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def cmd_tvalue(args) -> int:
    try:
        value = pareto_tail_value(args.alpha)
    except ValueError as exc:
        raise CliError(f"{exc} (usage: ptail tvalue ALPHA with ALPHA > 0)", EXIT_NUMERIC) from None
    print(f"{value:#.12g}")
    return EXIT_OK


def cmd_alpha(args) -> int:
    try:
        value = invert_tail_value(args.t)
    except ValueError as exc:
        raise CliError(f"{exc} (usage: ptail alpha T with 0 < T < 1)", EXIT_NUMERIC) from None
    print(f"{value:#.12g}")
    return EXIT_OK


def _plot_method(args, n: int, seed: int) -> VarianceMethod:
    if args.method == "auto":
        return default_method(n, seed=seed, bootstrap_reps=args.bootstrap_reps)
    return VarianceMethod(kind=args.method, bootstrap_reps=args.bootstrap_reps, seed=seed)


def _at_thresholds(sample, thresholds, level, method) -> str:
    lines = ["u,m,t_hat,ci_lo,ci_hi,alpha_hat"]
    for u in thresholds:
        est = tail_estimate(sample, u)
        try:
            ci = confidence_interval(sample, u, level, method)
            lo, hi = ci.lo, ci.hi
        except InsufficientExceedancesError:
            lo = hi = float("nan")
        lines.append(",".join([fmt(u), str(est.m), fmt(est.t_hat), fmt(lo), fmt(hi), fmt(implied_alpha(est.t_hat))]))
    return "\n".join(lines) + "\n"


def cmd_plot(args) -> int:
    spec = IngestSpec(
        path=args.input,
        column=args.column,
        delimiter=args.delimiter,
        header=args.header,
        min_threshold=args.min_threshold,
        rescale=args.rescale,
    )
    sample = load_sample(spec)
    seed = resolve_seed(args.seed, None)
    method = _plot_method(args, sample.n, seed)

    if args.at:
        try:
            text = _at_thresholds(sample, args.at, args.level, method)
        except InsufficientExceedancesError as exc:
            raise CliError(f"estimate: {exc}", EXIT_DATA) from None
        _write(args.output[0] if args.output else None, text)
        return EXIT_OK

    curve = build_curve(sample, level=args.level, method=method, quantile=args.quantile, workers=args.workers)
    if len(curve) == 0:
        raise CliError("estimate: no threshold with at least 2 exceedances", EXIT_DATA)
    outputs = args.output or ["-"]
    for path in outputs:
        fmt_name = args.format
        if fmt_name is None:
            ext = os.path.splitext(path)[1].lstrip(".").lower()
            fmt_name = ext if ext in FORMATS else "csv"
        if fmt_name == "csv":
            text = curve_csv(curve)
        elif fmt_name == "json":
            text = curve_json(curve)
        else:
            text = render_svg(curve, log_x=args.log_x, title=args.title or "")
        _write(path, text)
    return EXIT_OK


def cmd_coverage(args) -> int:
    if args.preset:
        if args.preset not in PRESETS:
            raise CliError(f"unknown preset {args.preset!r}; known: {', '.join(PRESETS)}", EXIT_USAGE)
        raw = dict(PRESETS[args.preset])
    elif args.config:
        raw = load_config_file(args.config)
    else:
        raise CliError("coverage needs a config file or --preset", EXIT_USAGE)
    overrides = {
        "reps": args.reps,
        "bootstrap_reps": args.bootstrap_reps,
        "methods": args.methods.split(",") if args.methods else None,
        "seed": args.seed,
    }
    sweep = build_sweep(raw, overrides)
    reports = [run_coverage(cfg, workers=args.workers) for cfg in sweep.configs]
    if sweep.key is None:
        label, values = "n_eff", None
    else:
        label = sweep.key.split(".")[-1]
        values = sweep.values
    table = format_table(reports, label=label, values=values)
    doc = {"sweep": sweep.key, "values": sweep.values, "reports": [r.to_dict() for r in reports]}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.json:
        _write(args.json, text)
    if args.table:
        _write(args.table, table)
    if not args.json and not args.table:
        sys.stdout.write(table)
    for r in reports:
        if r.flagged:
            print(f"warning: more than 10% of replicates dropped for {r.dist} at u={r.u:g}", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        dist = parse_distribution(" ".join(args.dist))
    except ValueError as exc:
        raise CliError(f"distribution: {exc}", EXIT_USAGE) from None
    if args.n < 2:
        raise CliError("n must be >= 2", EXIT_USAGE)
    seed = resolve_seed(args.seed, None)
    sample = dist.sample(args.n, RngStream(seed, args.stream))
    values = sample.values
    if not args.sorted:
        # unsorted output is a seeded permutation so it still looks iid
        values = RngStream(seed, args.stream, (1,)).generator().permutation(values)
    _write(args.output, "".join(f"{v:.17g}\n" for v in values))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptail", description="Pareto tail plot and tail-index tools")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("tvalue", help="tail value of a Pareto law with shape ALPHA")
    sp.add_argument("alpha", type=_num)
    sp.set_defaults(func=cmd_tvalue)

    sp = sub.add_parser("alpha", help="Pareto shape with tail value T")
    sp.add_argument("t", type=_num)
    sp.set_defaults(func=cmd_alpha)

    sp = sub.add_parser("plot", help="tail curve of a data column")
    sp.add_argument("input", help="delimited text file, '-' for stdin")
    sp.add_argument("--column", default="0", help="column name or 0-based index (default 0)")
    sp.add_argument("--delimiter", default=None, help="field delimiter (sniffed if omitted)")
    hdr = sp.add_mutually_exclusive_group()
    hdr.add_argument("--header", dest="header", action="store_true", default=None)
    hdr.add_argument("--no-header", dest="header", action="store_false")
    sp.add_argument("--min-threshold", type=_num, default=None, help="keep values >= this before rescaling")
    sp.add_argument("--rescale", type=_num, default=1.0, help="divide values by this after filtering")
    sp.add_argument("--quantile", type=_num, default=DEFAULT_QUANTILE, help="largest threshold as a sample quantile")
    sp.add_argument("--level", type=_num, default=DEFAULT_LEVEL)
    sp.add_argument("--method", choices=("auto",) + KINDS, default="auto")
    sp.add_argument("--bootstrap-reps", type=int, default=999)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--log-x", action="store_true", help="log-scaled threshold axis (SVG only)")
    sp.add_argument("--format", choices=FORMATS, default=None, help="output format (default: from extension, else csv)")
    sp.add_argument("--title", default=None)
    sp.add_argument("--at", type=_num, nargs="+", default=None, help="evaluate only at these thresholds")
    sp.add_argument("-o", "--output", action="append", default=None, help="output path; repeatable")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("coverage", help="Monte Carlo coverage of the confidence intervals")
    sp.add_argument("config", nargs="?", help="TOML config with a [coverage] table")
    sp.add_argument("--preset", default=None, help=f"built-in config: {', '.join(PRESETS)}")
    sp.add_argument("--methods", default=None, help="comma list of " + ",".join(KINDS))
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--bootstrap-reps", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--json", default=None, help="write the JSON report here")
    sp.add_argument("--table", default=None, help="write the text table here")
    sp.set_defaults(func=cmd_coverage)

    sp = sub.add_parser("simulate", help="draw a sample, one value per line")
    sp.add_argument("dist", nargs="+", help="family and key=value parameters, e.g. pareto1 x_m=1 alpha=1")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--stream", type=int, default=0)
    sp.add_argument("--sorted", action="store_true")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"ptail: {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"ptail: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"ptail: data error in {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ArithmeticError, RuntimeError) as exc:
        print(f"ptail: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
