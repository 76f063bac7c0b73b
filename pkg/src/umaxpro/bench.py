"""Monte Carlo benchmark functions, estimators and the subspace study."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .annealer import Schedule, optimize_batch, run_rng
from .criteria import CriterionSpec
from .design import Design, LhsDesign, Placement, SubspaceSelector, as_points, project
from .discrepancy import wd2_squared
from .samplers import HaltonSpec, halton, random_lhs, srs
from .statmodel import InputModel, Marginal, copula_transform, std_normal_inv_cdf

METHODS = ("srs", "lhs", "halton", "maxpro", "umaxpro")

SHORT_COLUMN_B = 5.0
SHORT_COLUMN_H = 15.0
CANTILEVER_L = 100.0
CANTILEVER_D0 = 2.2535
# beam cross-section defaults; override through TestFunction.constants
CANTILEVER_W = 4.0
CANTILEVER_T = 2.0


class BenchmarkError(ValueError):
    pass


def product_exp(x) -> np.ndarray:
    """prod_v exp(-x_v^2) over the last axis."""
    x = np.asarray(x, dtype=float)
    return np.exp(-np.sum(x * x, axis=-1))


def product_exp_exact_mean(d: int) -> float:
    if d < 1:
        raise BenchmarkError("dimension must be >= 1")
    return 3.0 ** (-d / 2.0)


def short_column(y, m, p, b=SHORT_COLUMN_B, h=SHORT_COLUMN_H):
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise BenchmarkError("yield stress must be positive")
    return 1.0 - 4.0 * m / (b * h**2 * y) - np.square(p) / (b**2 * h**2 * y**2)


def cantilever(e, x, y, w=CANTILEVER_W, t=CANTILEVER_T, L=CANTILEVER_L, which="stress"):
    """Free-end displacement or stress of a cantilever under loads ``x`` and ``y``."""
    if np.any(np.asarray(e) <= 0) or w <= 0 or t <= 0 or L <= 0:
        raise BenchmarkError("modulus and geometry must be positive")
    if which == "stress":
        return 600.0 * np.asarray(y) / (w * t**2) + 600.0 * np.asarray(x) / (w**2 * t)
    if which == "displacement":
        return 4.0 * L**3 / (np.asarray(e) * w * t) * np.hypot(np.asarray(y) / t**2,
                                                               np.asarray(x) / w**2)
    raise BenchmarkError(f"unknown cantilever response {which!r}")


# input models for the two engineering examples
SHORT_COLUMN_MODEL = InputModel(
    (Marginal("lognormal", 5.0, 0.5), Marginal("normal", 2000.0, 400.0),
     Marginal("normal", 500.0, 100.0)),
    np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.5], [0.0, 0.5, 1.0]]),
)
CANTILEVER_MODEL = InputModel.independent(
    (Marginal("normal", 40000.0, 2000.0), Marginal("normal", 2.9e7, 1.45e6),
     Marginal("normal", 500.0, 100.0), Marginal("normal", 1000.0, 100.0)),
)


class FunctionKind(str, Enum):
    PRODUCT_EXP = "product_exp"
    SHORT_COLUMN = "short_column"
    CANTILEVER_STRESS = "cantilever_stress"
    CANTILEVER_DISPLACEMENT = "cantilever_displacement"


@dataclass(frozen=True)
class TestFunction:
    kind: FunctionKind
    active_dims: Optional[int] = None
    constants: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def __post_init__(self):
        kind = FunctionKind(self.kind)
        fixed = {FunctionKind.SHORT_COLUMN: 3, FunctionKind.CANTILEVER_STRESS: 4,
                 FunctionKind.CANTILEVER_DISPLACEMENT: 4}
        dims = self.active_dims
        if kind in fixed:
            if dims not in (None, fixed[kind]):
                raise BenchmarkError(f"{kind.value} has {fixed[kind]} active dimensions")
            dims = fixed[kind]
        elif dims is None or dims < 1:
            raise BenchmarkError("product_exp needs active_dims >= 1")
        if any(not v > 0 for v in self.constants.values()):
            raise BenchmarkError("constants must be positive")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "active_dims", dims)

    @property
    def input_model(self) -> Optional[InputModel]:
        if self.kind is FunctionKind.SHORT_COLUMN:
            return SHORT_COLUMN_MODEL
        if self.kind is FunctionKind.PRODUCT_EXP:
            return None
        return CANTILEVER_MODEL

    @property
    def exact_mean(self) -> Optional[float]:
        if self.kind is FunctionKind.PRODUCT_EXP:
            return product_exp_exact_mean(self.active_dims)
        return None

    def transform(self, u: np.ndarray) -> np.ndarray:
        """Unit-cube rows to the function's physical inputs."""
        model = self.input_model
        if model is None:
            return std_normal_inv_cdf(u)
        return copula_transform(model, u)

    def evaluate(self, inputs: np.ndarray) -> np.ndarray:
        c = self.constants
        if self.kind is FunctionKind.PRODUCT_EXP:
            return product_exp(inputs)
        if self.kind is FunctionKind.SHORT_COLUMN:
            return short_column(inputs[:, 0], inputs[:, 1], inputs[:, 2],
                                c.get("b", SHORT_COLUMN_B), c.get("h", SHORT_COLUMN_H))
        # input order R, E, X, Y; R only enters limit-state forms
        which = "stress" if self.kind is FunctionKind.CANTILEVER_STRESS else "displacement"
        return cantilever(inputs[:, 1], inputs[:, 2], inputs[:, 3],
                          c.get("w", CANTILEVER_W), c.get("t", CANTILEVER_T),
                          c.get("L", CANTILEVER_L), which)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return self.evaluate(self.transform(u))


def _selector(active, n_var: int, n_active: int) -> SubspaceSelector:
    if active is None:
        active = tuple(range(n_active))
    sel = active if isinstance(active, SubspaceSelector) else SubspaceSelector(tuple(active))
    sel.check(n_var)
    if len(sel) != n_active:
        raise BenchmarkError(f"selector keeps {len(sel)} dims, function needs {n_active}")
    return sel


def mc_mean(points, f: Callable, active=None, n_active: Optional[int] = None) -> float:
    """Equal-weight average of ``f`` over design rows restricted to ``active`` columns.

    ``f`` maps unit-cube rows to values (a ``TestFunction`` does its own
    transform).  ``n_active`` defaults to ``f.active_dims`` when available.
    """
    pts = as_points(points)
    if n_active is None:
        n_active = getattr(f, "active_dims", None) or (len(active) if active is not None else pts.shape[1])
    sel = _selector(active, pts.shape[1], n_active)
    return float(np.mean(f(pts[:, list(sel.dims)])))


def rmse_over_runs(estimates: Sequence[float], exact: float) -> float:
    est = np.asarray(estimates, dtype=float)
    if est.size == 0:
        raise BenchmarkError("no estimates")
    return float(np.sqrt(np.mean((est - exact) ** 2)))


def empirical_quantile(values: Sequence[float], q: float) -> float:
    """Plain empirical quantile (linear interpolation between order statistics)."""
    return float(np.quantile(np.asarray(values, dtype=float), q))


@dataclass
class BenchmarkRecord:
    method: str
    n_sim: int
    estimates: np.ndarray
    exact: Optional[float] = None
    selector: Optional[tuple] = None
    seeds: Optional[tuple] = None

    @property
    def n_run(self) -> int:
        return len(self.estimates)

    @property
    def mean(self) -> float:
        return float(np.mean(self.estimates))

    @property
    def std(self) -> float:
        return float(np.std(self.estimates, ddof=1)) if self.n_run > 1 else 0.0

    @property
    def se(self) -> float:
        return self.std / math.sqrt(self.n_run)

    @property
    def rmse(self) -> Optional[float]:
        return None if self.exact is None else rmse_over_runs(self.estimates, self.exact)

    def summary(self) -> dict:
        return {"method": self.method, "n_sim": self.n_sim, "n_run": self.n_run,
                "mean": self.mean, "std": self.std, "rmse": self.rmse, "exact": self.exact,
                "selector": None if self.selector is None else "-".join(map(str, self.selector))}


# ---------------------------------------------------------------------------
# design batches


def make_designs(method: str, n_sim: int, n_var: int, n_run: int, seed: int,
                 sched: Schedule = Schedule(), placement=Placement.MEDIAN,
                 halton_shift: bool = True, workers: Optional[int] = None) -> List[Design]:
    """``n_run`` designs of one method; run ``r`` draws from stream (seed, r)."""
    if method in ("maxpro", "umaxpro"):
        res = optimize_batch(n_sim, n_var, CriterionSpec(method), n_run, seed, sched,
                             placement=placement, workers=workers)
        return [Design(as_points(r.best)) for r in res]
    out = []
    for r in range(n_run):
        rng = run_rng(seed, r)
        if method == "srs":
            out.append(srs(n_sim, n_var, rng))
        elif method == "lhs":
            out.append(Design(as_points(random_lhs(n_sim, n_var, rng, placement))))
        elif method == "halton":
            out.append(halton(n_sim, n_var, HaltonSpec(), seed=rng if halton_shift else None))
        else:
            raise BenchmarkError(f"unknown method {method!r}; expected one of {METHODS}")
    return out


def benchmark(designs: Iterable, f: Callable, method: str, exact: Optional[float] = None,
              active=None, n_active: Optional[int] = None) -> BenchmarkRecord:
    designs = list(designs)
    est = np.array([mc_mean(D, f, active, n_active) for D in designs])
    sel = None if active is None else tuple(active.dims if isinstance(active, SubspaceSelector) else active)
    return BenchmarkRecord(method, as_points(designs[0]).shape[0], est, exact, sel)


def all_selectors(parent_dim: int, sub_dim: int) -> List[SubspaceSelector]:
    if not 1 <= sub_dim <= parent_dim:
        raise BenchmarkError(f"need 1 <= sub_dim <= parent_dim, got {sub_dim}, {parent_dim}")
    return [SubspaceSelector(c) for c in itertools.combinations(range(parent_dim), sub_dim)]


@dataclass
class SubspaceResult:
    method: str
    sub_dim: int
    records: List[BenchmarkRecord]
    wd2: Dict[tuple, np.ndarray]

    @property
    def pooled_estimates(self) -> np.ndarray:
        return np.concatenate([r.estimates for r in self.records]) if self.records else np.array([])

    @property
    def pooled_abs_error(self) -> float:
        return float(np.mean(np.concatenate(
            [np.abs(r.estimates - r.exact) for r in self.records])))

    @property
    def pooled_wd2(self) -> np.ndarray:
        return np.concatenate(list(self.wd2.values()))


def subspace_benchmark(designs: Sequence, parent_dim: int, sub_dim: int,
                       f: Optional[Callable] = None, method: str = "",
                       metrics: Sequence[str] = ("wd2", "mc")) -> SubspaceResult:
    """Evaluate every ``sub_dim``-subset of columns of each design.

    ``f`` must accept ``sub_dim`` columns; with the default it is the product
    function in ``sub_dim`` dimensions.
    """
    if f is None:
        f = TestFunction(FunctionKind.PRODUCT_EXP, sub_dim)
    exact = getattr(f, "exact_mean", None)
    records, wd = [], {}
    designs = [D if isinstance(D, (Design, LhsDesign)) else Design(D) for D in designs]
    for sel in all_selectors(parent_dim, sub_dim):
        projected = [project(Design(as_points(D)), sel) for D in designs]
        if "wd2" in metrics:
            wd[sel.dims] = np.array([wd2_squared(P) for P in projected])
        if "mc" in metrics:
            est = np.array([mc_mean(P, f, n_active=sub_dim) for P in projected])
            records.append(BenchmarkRecord(method, projected[0].n_sim, est, exact, sel.dims))
    return SubspaceResult(method, sub_dim, records, wd)
