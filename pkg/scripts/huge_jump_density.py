"""Tabulate the conditional density of Z given the pair minimum, next to its Pareto limit.

    python scripts/huge_jump_density.py --dist "pareto2 theta=5 alpha=1.5" --alpha 1.5 --u 10 100 1000
"""

import argparse

import numpy as np

from ptail.distributions import parse_distribution
from ptail.tail_math import huge_jump_density, pareto_limit_density


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dist", default="pareto2 theta=5 alpha=1.5")
    ap.add_argument("--alpha", type=float, default=1.5, help="tail index of the limit")
    ap.add_argument("--u", type=float, nargs="+", default=[10.0, 100.0, 1000.0])
    ap.add_argument("--points", type=int, default=11)
    args = ap.parse_args()
    dist = parse_distribution(args.dist)
    z = np.linspace(0.0, 0.95, args.points)
    print("z       " + "  ".join(f"u={u:<10g}" for u in args.u) + "  limit")
    for zi in z:
        vals = [huge_jump_density(dist, u, zi) for u in args.u]
        print(f"{zi:.3f}   " + "  ".join(f"{v:<12.5f}" for v in vals) + f"  {pareto_limit_density(args.alpha, zi):.5f}")


if __name__ == "__main__":
    main()
