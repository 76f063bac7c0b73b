"""RMSE of the Monte Carlo mean of exp(-sum z^2) by sampling method."""

import argparse

from umaxpro.bench import TestFunction, benchmark, make_designs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nvar", type=int, default=2)
    ap.add_argument("--sizes", default="16,32,64")
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--methods", default="srs,lhs,halton,maxpro,umaxpro")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    f = TestFunction("product_exp", args.nvar)

    print(f"exact mean {f.exact_mean:.10f}")
    print(f"{'method':8s} {'N':>5s} {'mean':>12s} {'bias':>10s} {'rmse':>10s}")
    for n in (int(s) for s in args.sizes.split(",")):
        for method in args.methods.split(","):
            rec = benchmark(make_designs(method, n, args.nvar, args.runs, args.seed), f, method, f.exact_mean)
            print(f"{method:8s} {n:5d} {rec.mean:12.8f} {rec.mean - f.exact_mean:+10.2e} {rec.rmse:10.3e}")


if __name__ == "__main__":
    main()
