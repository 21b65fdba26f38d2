"""Estimated tail curves for the simulated families, as CSV (and SVG per curve).

    python scripts/figure2.py --out figure2/
"""

import argparse
import os

from ptail.coverage import figure2_curves
from ptail.distributions import FIGURE2_PRESETS
from ptail.ingest import curve_csv
from ptail.svg import render_svg


def slug(label):
    return "".join(c if c.isalnum() else "_" for c in label).strip("_").lower()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="figure2")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for preset in FIGURE2_PRESETS:
        res = figure2_curves(preset, n=args.n, seed=args.seed)
        for label, curve in res["curves"].items():
            base = os.path.join(args.out, slug(label))
            with open(base + ".csv", "w") as fh:
                fh.write(curve_csv(curve))
            with open(base + ".svg", "w") as fh:
                fh.write(render_svg(curve, log_x=True, title=label))
            limit = res["limits"][label]
            tail = f"limit {limit:.4f}" if limit is not None else "no limit (light tail)"
            print(f"{label:40s} t_hat at 0.5 q {curve.t_hat[len(curve.t_hat) // 2]:.4f}  end {curve.t_hat[-1]:.4f}  {tail}")


if __name__ == "__main__":
    main()
