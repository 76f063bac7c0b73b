"""Command-line entry point: generate, evaluate, histogram, benchmark.

Exit codes: 0 success, 1 runtime failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .annealer import Schedule, ScheduleError, default_workers, optimize_batch
from .bench import (METHODS, BenchmarkError, FunctionKind, TestFunction, all_selectors,
                    make_designs, mc_mean, rmse_over_runs)
from .criteria import CriterionSpec, Metric, maximin_value, maxpro_value, umaxpro_value
from .design import Design, Placement, SubspaceSelector, as_points, project
from .discrepancy import wd2_squared
from .fileio import (DesignFileError, atomic_write_text, read_design, table_text, write_design,
                     write_table)
from .uniformity import bin_histogram, radial_profile

log = logging.getLogger("umaxpro")

CRITERIA = ("umaxpro", "maxpro", "maximin", "pmaximin", "mm")


class UsageError(Exception):
    pass


def _int_list(text):
    return [int(t) for t in str(text).split(",") if t.strip()]


def _add_schedule_flags(p):
    p.add_argument("--alpha", type=float, default=0.95)
    p.add_argument("--t-init", type=float, default=None)
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--moves-per-temp", type=int, default=None)
    p.add_argument("--stall-limit", type=int, default=30)
    p.add_argument("--placement", choices=[p.value for p in Placement], default="median")


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $UMAXPRO_THREADS or 1)")
    p.add_argument("--config", default=None, help="JSON file whose keys override flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="umaxpro", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write optimized LHS designs")
    g.add_argument("--criterion", choices=CRITERIA, default="umaxpro")
    g.add_argument("--metric", choices=[m.value for m in Metric], default=None)
    g.add_argument("--k", type=float, default=None, help="Morris-Mitchell exponent")
    g.add_argument("--nsim", type=int, required=True)
    g.add_argument("--nvar", type=int, required=True)
    _add_schedule_flags(g)
    _add_common(g)

    e = sub.add_parser("evaluate", help="criteria and discrepancy of design files")
    e.add_argument("files", nargs="+")
    e.add_argument("--subspaces", type=int, default=None)
    e.add_argument("--out", default=None, help="report file (default: stdout)")

    h = sub.add_parser("histogram", help="pooled bin and radial histograms")
    h.add_argument("--criterion", choices=CRITERIA, default="umaxpro")
    h.add_argument("--metric", choices=[m.value for m in Metric], default=None)
    h.add_argument("--k", type=float, default=None)
    h.add_argument("--nsim", type=int, default=None)
    h.add_argument("--nvar", type=int, default=None)
    h.add_argument("--from", dest="source", default=None, help="directory of design files")
    h.add_argument("--subspaces", type=int, default=None)
    h.add_argument("--layers", type=int, default=20)
    _add_schedule_flags(h)
    _add_common(h)

    b = sub.add_parser("benchmark", help="Monte Carlo integration benchmark")
    b.add_argument("--function", choices=[f.value for f in FunctionKind], default="product_exp")
    b.add_argument("--nvar", type=int, default=None,
                   help="design dimension (default: active dims, +1 redundant for engineering functions)")
    b.add_argument("--active", type=int, default=None, help="active dims of product_exp")
    b.add_argument("--drop-dim", type=int, default=None,
                   help="redundant design column ignored by the function (default: last)")
    b.add_argument("--methods", default=",".join(METHODS))
    b.add_argument("--sampler", choices=["srs", "lhs", "halton"], default=None,
                   help="shorthand for --methods with a single baseline sampler")
    b.add_argument("--nsim", default="16", help="comma-separated sample sizes")
    b.add_argument("--subspaces", type=int, default=None)
    b.add_argument("--halton-shift", choices=["none", "random"], default="random")
    b.add_argument("--export-samples", action="store_true",
                   help="also write transformed inputs and responses per run")
    _add_schedule_flags(b)
    _add_common(b)
    return parser


def apply_config(parser, args):
    if getattr(args, "config", None) is None:
        return args
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    known = set(vars(args))
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("command", "config"):
            raise UsageError(f"unknown config key {key!r}")
        setattr(args, dest, value)
    return args


def _schedule(args) -> Schedule:
    return Schedule(t_init=args.t_init, alpha=args.alpha, moves_per_temperature=args.moves_per_temp,
                    t_min=args.t_min, stall_limit=args.stall_limit)


def _spec(args) -> CriterionSpec:
    return CriterionSpec.from_name(args.criterion, metric=args.metric, k=args.k)


def _validate_sizes(nsim, nvar, runs):
    if nsim is None or nvar is None:
        raise UsageError("--nsim and --nvar are required")
    if nsim < 2 or nvar < 1 or runs < 1:
        raise UsageError("need --nsim >= 2, --nvar >= 1 and --runs >= 1")


def design_basename(spec: CriterionSpec, n_sim: int, n_var: int, run: int) -> str:
    return f"{spec.kind.value}_n{n_sim}_d{n_var}_r{run:04d}.csv"


def cmd_generate(args) -> int:
    spec = _spec(args)
    sched = _schedule(args)
    _validate_sizes(args.nsim, args.nvar, args.runs)
    workers = args.workers or default_workers()
    results = optimize_batch(args.nsim, args.nvar, spec, args.runs, args.seed, sched,
                             placement=args.placement, workers=workers)
    out = Path(args.out)
    for res in results:
        design = Design(as_points(res.best))
        meta = {
            "n_sim": args.nsim,
            "n_var": args.nvar,
            "criterion": spec.kind.value,
            "metric": spec.metric.value,
            "k_exponent": spec.k_exponent,
            "placement": res.best.placement.value,
            "schedule": res.schedule.as_dict(),
            "seed": args.seed,
            "run": res.run,
            "objective": res.best_value,
            "initial_objective": res.initial_value,
            "wd2_squared": wd2_squared(design),
            "wd2": float(np.sqrt(max(wd2_squared(design), 0.0))),
            "accepted": res.accepted,
            "rejected": res.rejected,
            "polish_swaps": res.polish_swaps,
            "levels": res.best.levels.tolist(),
            "version": __version__,
        }
        write_design(out / design_basename(spec, args.nsim, args.nvar, res.run), design, meta)
    log.info("wrote %d designs to %s", len(results), out)
    return 0


EVAL_HEADER = ["file", "subspace", "n_sim", "n_var", "wd2_squared", "wd2", "maximin_intersite",
               "maximin_periodic", "maxpro", "umaxpro"]


def evaluate_row(name: str, design: Design, subspace: str = "all") -> list:
    sq = wd2_squared(design)
    return [name, subspace, design.n_sim, design.n_var, sq, float(np.sqrt(max(sq, 0.0))),
            maximin_value(design, Metric.INTERSITE), maximin_value(design, Metric.PERIODIC),
            float(maxpro_value(design)), float(umaxpro_value(design))]


def cmd_evaluate(args) -> int:
    rows = []
    for path in args.files:
        design = read_design(path)
        rows.append(evaluate_row(str(path), design))
        if args.subspaces is not None:
            if not 1 <= args.subspaces <= design.n_var:
                raise UsageError(f"--subspaces must be in 1..{design.n_var}")
            for sel in all_selectors(design.n_var, args.subspaces):
                rows.append(evaluate_row(str(path), project(design, sel),
                                         "-".join(map(str, sel.dims))))
    text = table_text(EVAL_HEADER, rows)
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _load_dir(source) -> list:
    files = sorted(p for p in Path(source).glob("*.csv"))
    if not files:
        raise UsageError(f"no design files in {source}")
    return [read_design(p) for p in files]


def cmd_histogram(args) -> int:
    if args.source:
        designs = _load_dir(args.source)
        label = str(args.source)
    else:
        _validate_sizes(args.nsim, args.nvar, args.runs)
        spec = _spec(args)
        res = optimize_batch(args.nsim, args.nvar, spec, args.runs, args.seed, _schedule(args),
                             placement=args.placement, workers=args.workers or default_workers())
        designs = [Design(as_points(r.best)) for r in res]
        label = spec.kind.value
    n_var = designs[0].n_var
    selectors = ([SubspaceSelector(tuple(range(n_var)))] if args.subspaces is None
                 else all_selectors(n_var, args.subspaces))
    out = Path(args.out)
    bin_rows, report = [], {"source": label, "n_run": len(designs), "n_sim": designs[0].n_sim,
                            "n_var": n_var, "histograms": []}
    for sel in selectors:
        hist = bin_histogram(designs, sel)
        stat, p = hist.chi_square()
        dims = "-".join(map(str, sel.dims))
        for idx, count, f in hist.table():
            bin_rows.append([dims, "-".join(map(str, idx)), count, f])
        report["histograms"].append({"dims": dims, "chi2": stat, "p_value": p,
                                     "corner_f": hist.corner_relative().tolist(),
                                     "min_f": float(hist.relative.min()),
                                     "max_f": float(hist.relative.max())})
    prof = radial_profile(designs, n_layers=args.layers)
    report["delta"] = prof.delta
    write_table(out / "bins.csv", ["dims", "bin", "count", "f"], bin_rows)
    write_table(out / "radial.csv", ["layer", "r_lo", "r_hi", "count", "volume", "density_ratio"],
                prof.table())
    atomic_write_text(out / "report.json", json.dumps(report, indent=2) + "\n")
    return 0


def cmd_benchmark(args) -> int:
    kind = FunctionKind(args.function)
    methods = [args.sampler] if args.sampler else [m for m in str(args.methods).split(",") if m]
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}")
    sizes = _int_list(args.nsim)
    if kind is FunctionKind.PRODUCT_EXP:
        active = args.active or args.nvar or 2
        f = TestFunction(kind, active)
        n_var = args.nvar or active
    else:
        f = TestFunction(kind)
        n_var = args.nvar or f.active_dims + 1
    if n_var < f.active_dims:
        raise UsageError(f"--nvar {n_var} is below the function's {f.active_dims} active dims")
    sched = _schedule(args)
    out = Path(args.out)
    run_rows, summary_rows = [], []
    if args.subspaces is not None:
        if kind is not FunctionKind.PRODUCT_EXP:
            raise UsageError("--subspaces applies to product_exp only")
        f = TestFunction(kind, args.subspaces)
        selectors = all_selectors(n_var, args.subspaces)
    else:
        drop = n_var - 1 if args.drop_dim is None else args.drop_dim
        keep = [v for v in range(n_var) if v != drop] if n_var > f.active_dims else list(range(n_var))
        selectors = [SubspaceSelector(tuple(keep[: f.active_dims]))]
    exact = f.exact_mean
    for m in methods:
        for n in sizes:
            designs = make_designs(m, n, n_var, args.runs, args.seed, sched, args.placement,
                                   halton_shift=args.halton_shift == "random",
                                   workers=args.workers or default_workers())
            pooled = []
            for sel in selectors:
                est = []
                for r, D in enumerate(designs):
                    value = mc_mean(D, f, sel)
                    est.append(value)
                    run_rows.append([m, n, r, "-".join(map(str, sel.dims)), value])
                    if args.export_samples:
                        P = project(D, sel)
                        inputs = f.transform(P.points)
                        resp = f.evaluate(inputs)
                        write_table(out / "samples" / f"{m}_n{n}_r{r:04d}_{'-'.join(map(str, sel.dims))}.csv",
                                    [f"u{v}" for v in sel.dims] + [f"x{v}" for v in range(inputs.shape[1])] + ["y"],
                                    np.column_stack([P.points, inputs, resp]).tolist())
                pooled.extend(est)
                summary_rows.append(_summary_row(m, n, "-".join(map(str, sel.dims)), est, exact))
            if len(selectors) > 1:
                summary_rows.append(_summary_row(m, n, "pooled", pooled, exact))
    write_table(out / "runs.csv", ["method", "n_sim", "run", "subspace", "estimate"], run_rows)
    write_table(out / "summary.csv",
                ["method", "n_sim", "subspace", "n_run", "mean", "std", "rmse", "exact"],
                summary_rows)
    return 0


def _summary_row(method, n, subspace, est, exact):
    est = np.asarray(est)
    std = float(np.std(est, ddof=1)) if len(est) > 1 else 0.0
    rmse = "" if exact is None else rmse_over_runs(est, exact)
    return [method, n, subspace, len(est), float(np.mean(est)), std, rmse,
            "" if exact is None else float(exact)]


COMMANDS = {"generate": cmd_generate, "evaluate": cmd_evaluate,
            "histogram": cmd_histogram, "benchmark": cmd_benchmark}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args = apply_config(parser, args)
        return COMMANDS[args.command](args)
    except (UsageError, DesignFileError, ScheduleError, BenchmarkError, ValueError) as exc:
        print(f"umaxpro {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"umaxpro {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
