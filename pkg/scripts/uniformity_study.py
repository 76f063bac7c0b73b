"""Pooled bin histograms and radial profiles of MaxPro vs uMaxPro designs.

    python scripts/uniformity_study.py --nsim 8 --nvar 2 --runs 2000
"""

import argparse

import numpy as np

from umaxpro.bench import make_designs
from umaxpro.uniformity import bin_histogram, radial_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nsim", type=int, default=8)
    ap.add_argument("--nvar", type=int, default=2)
    ap.add_argument("--runs", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    for method in ("maxpro", "umaxpro"):
        designs = make_designs(method, args.nsim, args.nvar, args.runs, args.seed)
        hist = bin_histogram(designs)
        stat, p = hist.chi_square()
        prof = radial_profile(designs)
        print(f"{method:8s} chi2={stat:9.2f} p={p:.3g} corners={np.round(hist.corner_relative(), 3)} "
              f"delta={prof.delta:.4f}")
        if args.nvar == 2:
            print(np.array2string(hist.relative, precision=2, max_line_width=200))


if __name__ == "__main__":
    main()
