"""Coverage versus effective sample size, Pareto I alpha=1 at u=2.

    python scripts/table2.py --workers 4 --reps 10000
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
    args = ap.parse_args()
    overrides = {k: v for k, v in vars(args).items() if k != "workers" and v is not None}
    sweep = build_sweep(PRESETS["table2"], overrides)
    reports = [run_coverage(cfg, workers=args.workers) for cfg in sweep.configs]
    print(format_table(reports, label="n_eff"))


if __name__ == "__main__":
    main()
