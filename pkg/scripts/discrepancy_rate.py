"""Convergence rate of the wrap-around L2 discrepancy for uMaxPro designs.

Fits log(median WD2^2) against log N; uniform random points give slope -1.
"""

import argparse

import numpy as np

from umaxpro.bench import make_designs
from umaxpro.discrepancy import wd2_squared


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nvar", type=int, default=2)
    ap.add_argument("--sizes", default="8,16,32,64,128")
    ap.add_argument("--runs", type=int, default=25)
    ap.add_argument("--methods", default="srs,lhs,umaxpro")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    for method in args.methods.split(","):
        med = [np.median([wd2_squared(D) for D in make_designs(method, n, args.nvar, args.runs, args.seed)])
               for n in sizes]
        slope = np.polyfit(np.log(sizes), np.log(med), 1)[0]
        cells = "  ".join(f"{n}:{m:.3e}" for n, m in zip(sizes, med))
        print(f"{method:8s} slope={slope:+.3f}  {cells}")


if __name__ == "__main__":
    main()
