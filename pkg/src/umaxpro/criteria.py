"""Design-quality criteria: MaxPro, uMaxPro, Morris-Mitchell and (periodic) Maximin.

All objectives except Maximin are minimized.  ``CriterionSpec.objective``
returns the minimized form of any criterion (minus the smallest distance for
the Maximin family), which is what the annealer works with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from . import _kernels as K
from .design import Design, LhsDesign, Placement, as_points, level_coordinates


class Metric(str, Enum):
    INTERSITE = "intersite"
    PERIODIC = "periodic"


class CriterionKind(str, Enum):
    MAXPRO = "maxpro"
    UMAXPRO = "umaxpro"
    MORRIS_MITCHELL = "morris_mitchell"
    MAXIMIN = "maximin"
    PERIODIC_MAXIMIN = "periodic_maximin"


DEFAULT_MM_EXPONENT = 15.0


class InfiniteObjective(float):
    """Infinite objective value that remembers which pair caused it.

    Behaves as ``float('inf')`` in comparisons; ``pair`` is ``(i, j)`` with
    ``i < j`` and ``dim`` the first dimension with a zero projection distance
    (``None`` when the points coincide under a full-space metric).
    """

    def __new__(cls, pair, dim=None):
        obj = super().__new__(cls, math.inf)
        obj.pair = (int(pair[0]), int(pair[1]))
        obj.dim = None if dim is None else int(dim)
        return obj

    def __repr__(self):
        return f"InfiniteObjective(pair={self.pair}, dim={self.dim})"


@dataclass(frozen=True)
class CriterionSpec:
    kind: CriterionKind = CriterionKind.UMAXPRO
    k_exponent: Optional[float] = None
    metric: Optional[Metric] = None

    def __post_init__(self):
        kind = CriterionKind(self.kind)
        metric = None if self.metric is None else Metric(self.metric)
        k = self.k_exponent
        if kind is CriterionKind.MAXPRO:
            if metric not in (None, Metric.INTERSITE):
                raise ValueError("maxpro is defined with the intersite metric")
            metric = Metric.INTERSITE
        elif kind is CriterionKind.UMAXPRO:
            if metric not in (None, Metric.PERIODIC):
                raise ValueError("umaxpro is defined with the periodic metric")
            metric = Metric.PERIODIC
        elif kind is CriterionKind.PERIODIC_MAXIMIN:
            if metric not in (None, Metric.PERIODIC):
                raise ValueError("periodic_maximin uses the periodic metric")
            metric = Metric.PERIODIC
        elif metric is None:
            metric = Metric.INTERSITE
        if kind is CriterionKind.MORRIS_MITCHELL:
            k = DEFAULT_MM_EXPONENT if k is None else float(k)
            if not k >= 1.0:
                raise ValueError(f"Morris-Mitchell exponent must be >= 1, got {k}")
        elif k is not None:
            raise ValueError("k_exponent only applies to morris_mitchell")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "metric", metric)
        object.__setattr__(self, "k_exponent", k)

    @classmethod
    def from_name(cls, name: str, metric=None, k=None) -> "CriterionSpec":
        """Build from CLI-style names: umaxpro, maxpro, maximin, pmaximin, mm."""
        aliases = {
            "pmaximin": CriterionKind.PERIODIC_MAXIMIN,
            "mm": CriterionKind.MORRIS_MITCHELL,
        }
        kind = aliases.get(name, None) or CriterionKind(name)
        if kind is CriterionKind.MAXIMIN and metric == Metric.PERIODIC.value:
            kind, metric = CriterionKind.PERIODIC_MAXIMIN, None
        return cls(kind, k, metric)

    @property
    def periodic(self) -> bool:
        return self.metric is Metric.PERIODIC

    @property
    def is_maximin(self) -> bool:
        return self.kind in (CriterionKind.MAXIMIN, CriterionKind.PERIODIC_MAXIMIN)

    @property
    def kernel_kind(self) -> int:
        if self.kind in (CriterionKind.MAXPRO, CriterionKind.UMAXPRO):
            return K.PROJ
        if self.kind is CriterionKind.MORRIS_MITCHELL:
            return K.MM
        return K.MAXIMIN

    def objective(self, design: Union[Design, LhsDesign]) -> float:
        """Minimized objective value of ``design`` under this criterion."""
        pts = as_points(design)
        if self.kind is CriterionKind.MAXPRO:
            return maxpro_value(pts)
        if self.kind is CriterionKind.UMAXPRO:
            return umaxpro_value(pts)
        if self.kind is CriterionKind.MORRIS_MITCHELL:
            return morris_mitchell_value(pts, self.k_exponent, self.metric)
        return -maximin_value(pts, self.metric)


def delta(xi, xj):
    """Projection distance |xi - xj| (elementwise for arrays)."""
    return abs(xi - xj)


def periodic_delta(d):
    """Minimum-image projection distance min(d, 1 - d)."""
    return np.minimum(d, 1.0 - d)


def _pair_deltas(pts: np.ndarray, periodic: bool):
    n = pts.shape[0]
    iu, ju = np.triu_indices(n, 1)
    dl = np.abs(pts[iu] - pts[ju])
    if periodic:
        dl = np.minimum(dl, 1.0 - dl)
    return iu, ju, dl


def _projection_value(pts, periodic: bool) -> float:
    pts = as_points(pts)
    n, d = pts.shape
    if n < 2:
        raise ValueError("criterion needs at least two points")
    iu, ju, dl = _pair_deltas(pts, periodic)
    zero = dl == 0.0
    if zero.any():
        p = int(np.flatnonzero(zero.any(axis=1))[0])
        return InfiniteObjective((iu[p], ju[p]), int(np.flatnonzero(zero[p])[0]))
    prod = np.prod(dl * dl, axis=1)
    s = float(np.sum(1.0 / prod))
    return (s / len(iu)) ** (1.0 / d)


def maxpro_value(design) -> float:
    """MaxPro objective with intersite projection distances (minimize)."""
    return _projection_value(design, periodic=False)


def umaxpro_value(design) -> float:
    """uMaxPro objective: MaxPro with minimum-image projection distances."""
    return _projection_value(design, periodic=True)


def morris_mitchell_value(design, k: float = DEFAULT_MM_EXPONENT, metric=Metric.INTERSITE) -> float:
    pts = as_points(design)
    if k < 1:
        raise ValueError(f"exponent must be >= 1, got {k}")
    iu, ju, dl = _pair_deltas(pts, Metric(metric) is Metric.PERIODIC)
    sq = np.sum(dl * dl, axis=1)
    if np.any(sq == 0.0):
        p = int(np.flatnonzero(sq == 0.0)[0])
        return InfiniteObjective((iu[p], ju[p]))
    s = float(np.sum(sq ** (-0.5 * k)))
    return (s / len(iu)) ** (1.0 / k)


def maximin_value(design, metric=Metric.INTERSITE) -> float:
    """Smallest pairwise (periodic) Euclidean distance (maximize)."""
    pts = as_points(design)
    if pts.shape[0] < 2:
        raise ValueError("maximin needs at least two points")
    _, _, dl = _pair_deltas(pts, Metric(metric) is Metric.PERIODIC)
    return float(np.sqrt(np.min(np.sum(dl * dl, axis=1))))


# ---------------------------------------------------------------------------
# incremental evaluation


@dataclass
class SwapToken:
    dim: int
    a: int
    b: int
    row_a: np.ndarray
    row_b: np.ndarray
    total: float
    since_refresh: int


class CriterionState:
    """Cached pair terms of one design under one criterion.

    Mutable and single-owner.  ``swap_delta`` applies a coordinate swap and
    returns the new objective with an undo token; ``undo`` restores the
    previous cached terms exactly.
    """

    def __init__(self, design: Union[Design, LhsDesign], spec: CriterionSpec):
        self.spec = spec
        if isinstance(design, LhsDesign):
            self.levels = np.array(design.levels, dtype=np.int64)
            self.placement = design.placement
            if design.offsets is None:
                self.offsets = np.full(self.levels.shape, 0.5)
            else:
                self.offsets = np.array(design.offsets, dtype=float)
            self.x = level_coordinates(self.levels, design.offsets).copy()
        else:
            self.x = np.array(design.points, dtype=float)
            self.levels = np.zeros(self.x.shape, dtype=np.int64)
            self.offsets = np.zeros(self.x.shape)
            self.placement = None
        n, d = self.x.shape
        if n < 2:
            raise ValueError("criterion state needs at least two points")
        self.n_sim, self.n_var = n, d
        self.npairs = n * (n - 1) / 2.0
        self.kind = spec.kernel_kind
        self.k = spec.k_exponent or 1.0
        self.refresh_every = 10 * n
        self._buf_a = np.empty(n)
        self._buf_b = np.empty(n)
        self.refresh(rebuild_terms=True)

    def refresh(self, rebuild_terms: bool = False) -> None:
        """Recompute the running total from the cached terms (and optionally the terms)."""
        if rebuild_terms:
            self.terms = K.fill_terms(self.x, self.kind, self.spec.periodic, self.k)
        self.total = K.reduce_terms(self.terms, self.kind)
        self.since_refresh = 0

    @property
    def value(self) -> float:
        if math.isinf(self.total) and self.kind != K.MAXIMIN:
            # locate the offending pair for the sentinel
            return self.spec.objective(self.x)
        return float(K.objective(self.total, self.kind, self.npairs, self.n_var, self.k))

    def swap_delta(self, dim: int, a: int, b: int):
        """Exchange coordinates of rows ``a`` and ``b`` in ``dim``.

        Only the 2(n-2)+1 pairs touching ``a`` or ``b`` are recomputed.
        Returns ``(new objective, token)``.
        """
        if a == b:
            raise ValueError("swap rows must differ")
        token = SwapToken(dim, a, b, self.terms[a].copy(), self.terms[b].copy(),
                          self.total, self.since_refresh)
        S_new = K.trial_swap(self.x, self.terms, self.total, dim, a, b, self.kind,
                             self.spec.periodic, self.k, self._buf_a, self._buf_b)
        K.commit_swap(self.x, self.levels, self.offsets, self.terms, dim, a, b,
                      self._buf_a, self._buf_b)
        self.total = S_new
        self.since_refresh += 1
        if self.since_refresh >= self.refresh_every:
            self.refresh()
        return self.value, token

    def undo(self, token: SwapToken) -> None:
        v, a, b = token.dim, token.a, token.b
        for arr in (self.x, self.levels, self.offsets):
            arr[a, v], arr[b, v] = arr[b, v], arr[a, v]
        self.terms[a, :] = token.row_a
        self.terms[:, a] = token.row_a
        self.terms[b, :] = token.row_b
        self.terms[:, b] = token.row_b
        self.total = token.total
        self.since_refresh = token.since_refresh

    def lhs(self) -> LhsDesign:
        if self.placement is None:
            raise ValueError("state was not built from an LhsDesign")
        offsets = None if self.placement is Placement.MEDIAN else self.offsets.copy()
        return LhsDesign(self.levels.copy(), self.placement, offsets)

    def design(self) -> Design:
        return Design(self.x.copy())


def build_state(design, spec: CriterionSpec) -> CriterionState:
    return CriterionState(design, spec)
