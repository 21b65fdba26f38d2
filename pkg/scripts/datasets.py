"""Check the dataset recipes against local copies, or print their documentation.

    python scripts/datasets.py --data-dir ~/loss-data
    python scripts/datasets.py --markdown > docs/datasets.md
"""

import argparse
import os

from ptail.ingest import load_sample
from ptail.recipes import RECIPES
from ptail.tail_math import invert_tail_value
from ptail.ustat import tail_estimate


def markdown():
    out = [
        "# Datasets",
        "",
        "The loss datasets are not shipped. Put each file in one folder under the",
        "name given below, one value per row in the first column (a header row is",
        "detected and skipped). Then run",
        "",
        "    PTAIL_DATA_DIR=/path/to/folder pytest tests/test_datasets.py tests/test_acceptance.py",
        "",
        "or `python scripts/datasets.py --data-dir /path/to/folder`.",
        "",
    ]
    for r in RECIPES.values():
        spec = r.ingest
        flags = []
        if spec.min_threshold is not None:
            flags.append(f"--min-threshold {spec.min_threshold:g}")
        if spec.rescale != 1.0:
            flags.append(f"--rescale {spec.rescale:g}")
        out += [
            f"## {r.name}",
            "",
            f"- file: `{r.filename}`",
            f"- source: {r.source}",
            f"- preparation: {r.note}",
            f"- sample size after preparation: {r.n_expected}",
            f"- CLI: `{' '.join(['ptail plot', r.filename, *flags])}`",
            "",
            "| u | t_hat | alpha | exceedances |",
            "|---|---|---|---|",
        ]
        for cp in r.checkpoints:
            out.append(f"| {cp.u:g} | {cp.t_hat} | {cp.alpha} | {cp.m if cp.m is not None else ''} |")
        out.append("")
    return "\n".join(out)


def check(directory):
    bad = 0
    for r in RECIPES.values():
        spec = r.spec_for(directory)
        if not os.path.exists(spec.path):
            print(f"{r.name:9s} missing {spec.path}")
            continue
        s = load_sample(spec)
        print(f"{r.name:9s} n = {s.n} (expected {r.n_expected})")
        for cp in r.checkpoints:
            est = tail_estimate(s, cp.u)
            ok = abs(est.t_hat - cp.t_hat) <= 0.01
            bad += not ok
            alpha = invert_tail_value(est.t_hat) if 0 < est.t_hat < 1 else float("nan")
            print(f"  u={cp.u:<7g} m={est.m:<5d} t_hat={est.t_hat:.3f} (listed {cp.t_hat})  alpha={alpha:.2f}  {'ok' if ok else 'OFF'}")
    return bad


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--data-dir", default=os.environ.get("PTAIL_DATA_DIR"))
    ap.add_argument("--markdown", action="store_true")
    args = ap.parse_args()
    if args.markdown:
        print(markdown())
        return 0
    if not args.data_dir:
        ap.error("give --data-dir or set PTAIL_DATA_DIR")
    return 1 if check(args.data_dir) else 0


if __name__ == "__main__":
    raise SystemExit(main())
