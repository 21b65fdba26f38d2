"""Coverage across Pareto I shapes at n_eff=20, for thresholds u=2 and u=3.

    python scripts/table1.py --workers 4
"""

import argparse

from ptail.config import PRESETS, build_sweep
from ptail.coverage import format_table, run_coverage


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=None)
    ap.add_argument("--bootstrap-reps", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--thresholds", type=float, nargs="+", default=[2.0, 3.0])
    args = ap.parse_args()
    overrides = {k: v for k, v in vars(args).items() if k not in ("workers", "thresholds") and v is not None}
    for u in args.thresholds:
        sweep = build_sweep({**PRESETS["table1"], "u": u}, overrides)
        reports = [run_coverage(cfg, workers=args.workers) for cfg in sweep.configs]
        alphas = [cfg.dist.alpha for cfg in sweep.configs]
        print(f"u = {u:g}")
        print(format_table(reports, label="alpha", values=alphas))


if __name__ == "__main__":
    main()
