"""Short-column and cantilever response statistics by sampling method.

Reference values come from one large simple random sample.
"""

import argparse

import numpy as np

from umaxpro.bench import TestFunction, make_designs, mc_mean
from umaxpro.samplers import srs

FUNCTIONS = ("short_column", "cantilever_stress", "cantilever_displacement")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nsim", type=int, default=32)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--methods", default="srs,lhs,maxpro,umaxpro")
    ap.add_argument("--reference-size", type=int, default=2_000_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    for name in FUNCTIONS:
        f = TestFunction(name)
        ref_pts = srs(args.reference_size, f.active_dims, args.seed + 10**6).points
        ref_pts = ref_pts[np.all(ref_pts > 0, axis=1)]
        ref = float(np.mean(f(ref_pts)))
        print(f"{name}: reference mean {ref:.6g}")
        for method in args.methods.split(","):
            est = np.array([mc_mean(D, f) for D in
                            make_designs(method, args.nsim, f.active_dims, args.runs, args.seed)])
            rmse = np.sqrt(np.mean((est - ref) ** 2))
            print(f"  {method:8s} mean {est.mean():.6g}  rmse {rmse:.4g}")


if __name__ == "__main__":
    main()
