"""Design representations, LHS level bookkeeping, projection and mod-1 shifts.

Designs live in the half-open unit cube [0, 1)^d.  Latin hypercube designs keep
their integer levels alongside the coordinates so that optimizers can swap
levels exactly instead of shuffling floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np


class DesignError(ValueError):
    """Raised for malformed designs, permutations or selectors."""


@dataclass(frozen=True)
class Design:
    """An ``n_sim x n_var`` point set in [0, 1)^n_var."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim != 2:
            raise DesignError(f"points must be a 2-D array, got shape {pts.shape}")
        n, d = pts.shape
        if n < 1 or d < 1:
            raise DesignError(f"empty design of shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DesignError("non-finite coordinate in design")
        if np.any(pts < 0.0) or np.any(pts >= 1.0):
            bad = np.argwhere((pts < 0.0) | (pts >= 1.0))[0]
            raise DesignError(
                f"coordinate {pts[tuple(bad)]!r} at row {bad[0]}, column {bad[1]} "
                "is outside [0, 1)"
            )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n_sim(self) -> int:
        return self.points.shape[0]

    @property
    def n_var(self) -> int:
        return self.points.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Design):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    __hash__ = None


class Placement(str, Enum):
    MEDIAN = "median"
    RANDOM = "random"


@dataclass(frozen=True)
class LhsDesign:
    """Latin hypercube in level form.

    ``levels[s, v]`` is the zero-based stratum index of point ``s`` in
    dimension ``v``; each column is a permutation of ``0..n_sim-1``.
    ``offsets`` (only for random placement) holds the within-stratum
    position of each point, in (0, 1).
    """

    levels: np.ndarray
    placement: Placement = Placement.MEDIAN
    offsets: Optional[np.ndarray] = None

    def __post_init__(self):
        lv = np.array(self.levels, copy=True)
        if lv.ndim != 2:
            raise DesignError(f"levels must be 2-D, got shape {lv.shape}")
        if not np.issubdtype(lv.dtype, np.integer):
            if not np.all(np.equal(np.mod(lv, 1), 0)):
                raise DesignError("levels must be integers")
        lv = lv.astype(np.int64)
        n, d = lv.shape
        if n < 2 or d < 1:
            raise DesignError(f"LHS needs n_sim >= 2 and n_var >= 1, got {lv.shape}")
        expected = np.arange(n)
        for v in range(d):
            col = lv[:, v]
            if col.min() < 0 or col.max() >= n:
                raise DesignError(f"level out of range 0..{n - 1} in dimension {v}")
            if not np.array_equal(np.sort(col), expected):
                counts = np.bincount(col, minlength=n)
                dup = int(np.flatnonzero(counts > 1)[0])
                raise DesignError(f"level {dup} repeated in dimension {v}")
        placement = Placement(self.placement)
        offsets = self.offsets
        if placement is Placement.RANDOM:
            if offsets is None:
                raise DesignError("random placement requires offsets")
            offsets = np.array(offsets, dtype=float, copy=True)
            if offsets.shape != lv.shape:
                raise DesignError("offsets shape must match levels")
            if np.any(offsets <= 0.0) or np.any(offsets >= 1.0):
                raise DesignError("offsets must lie strictly inside (0, 1)")
            offsets.setflags(write=False)
        elif offsets is not None:
            raise DesignError("offsets are only used with random placement")
        lv.setflags(write=False)
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "placement", placement)
        object.__setattr__(self, "offsets", offsets)

    @property
    def n_sim(self) -> int:
        return self.levels.shape[0]

    @property
    def n_var(self) -> int:
        return self.levels.shape[1]

    def with_levels(self, levels: np.ndarray) -> "LhsDesign":
        return LhsDesign(levels, self.placement, self.offsets)

    def __eq__(self, other):
        if not isinstance(other, LhsDesign):
            return NotImplemented
        same_off = (self.offsets is None and other.offsets is None) or (
            self.offsets is not None
            and other.offsets is not None
            and np.array_equal(self.offsets, other.offsets)
        )
        return (
            self.placement is other.placement
            and np.array_equal(self.levels, other.levels)
            and same_off
        )

    __hash__ = None


def level_coordinates(levels: np.ndarray, offsets: Optional[np.ndarray] = None) -> np.ndarray:
    """Coordinates for zero-based levels; midpoints when ``offsets`` is None."""
    n = levels.shape[0]
    if offsets is None:
        return (levels + 0.5) / n
    return (levels + offsets) / n


def as_points(design) -> np.ndarray:
    """Coordinate matrix of a Design, an LhsDesign or a bare array."""
    if isinstance(design, LhsDesign):
        return level_coordinates(design.levels, design.offsets)
    if isinstance(design, Design):
        return design.points
    return np.asarray(design, dtype=float)


def realize(lhs: LhsDesign) -> Design:
    """Map an LHS in level form to unit-cube coordinates.

    Median placement puts each point at its stratum midpoint,
    ``(level + 0.5) / n_sim``; random placement uses the stored offsets.
    """
    return Design(level_coordinates(lhs.levels, lhs.offsets))


@dataclass(frozen=True)
class LhsDiagnostics:
    n_levels: int
    passed: tuple  # per-dimension bool
    offending_rows: tuple  # per-dimension tuple of row indices sharing a stratum

    @property
    def is_lhs(self) -> bool:
        return all(self.passed)


def stratum_index(x: np.ndarray, n_levels: int) -> np.ndarray:
    """Zero-based stratum of each coordinate; boundaries go to the upper stratum."""
    idx = np.floor(np.asarray(x, dtype=float) * n_levels).astype(np.int64)
    return np.clip(idx, 0, n_levels - 1)


def validate_lhs(design: Design, n_levels: Optional[int] = None) -> LhsDiagnostics:
    """Check that every one of ``n_levels`` strata holds exactly one point, per dimension."""
    if n_levels is None:
        n_levels = design.n_sim
    strata = stratum_index(design.points, n_levels)
    passed = []
    offending = []
    for v in range(design.n_var):
        col = strata[:, v]
        counts = np.bincount(col, minlength=n_levels)
        ok = design.n_sim == n_levels and bool(np.all(counts == 1))
        passed.append(ok)
        crowded = np.flatnonzero(counts > 1)
        offending.append(tuple(int(r) for r in np.flatnonzero(np.isin(col, crowded))))
    return LhsDiagnostics(n_levels, tuple(passed), tuple(offending))


@dataclass(frozen=True)
class SubspaceSelector:
    """Strictly increasing column indices of a projection."""

    dims: tuple

    def __post_init__(self):
        dims = tuple(int(i) for i in self.dims)
        if not dims:
            raise DesignError("selector must keep at least one dimension")
        if any(b <= a for a, b in zip(dims, dims[1:])):
            raise DesignError(f"selector indices must be strictly increasing: {dims}")
        if dims[0] < 0:
            raise DesignError(f"negative selector index in {dims}")
        object.__setattr__(self, "dims", dims)

    def check(self, n_var: int) -> None:
        if self.dims[-1] >= n_var:
            raise DesignError(f"selector {self.dims} invalid for a {n_var}-D design")

    def compose(self, inner: "SubspaceSelector") -> "SubspaceSelector":
        """Selector equivalent to applying ``self`` and then ``inner``."""
        inner.check(len(self.dims))
        return SubspaceSelector(tuple(self.dims[i] for i in inner.dims))

    def __len__(self):
        return len(self.dims)


def project(design: Design, sel: SubspaceSelector | Sequence[int]) -> Design:
    if not isinstance(sel, SubspaceSelector):
        sel = SubspaceSelector(tuple(sel))
    sel.check(design.n_var)
    return Design(design.points[:, list(sel.dims)])


def project_lhs(lhs: LhsDesign, sel: SubspaceSelector | Sequence[int]) -> LhsDesign:
    if not isinstance(sel, SubspaceSelector):
        sel = SubspaceSelector(tuple(sel))
    sel.check(lhs.n_var)
    cols = list(sel.dims)
    offsets = None if lhs.offsets is None else lhs.offsets[:, cols]
    return LhsDesign(lhs.levels[:, cols], lhs.placement, offsets)


def translate_mod1(design: Design, shift: Sequence[float]) -> Design:
    """Shift every coordinate by ``shift[v]`` modulo 1."""
    c = np.asarray(shift, dtype=float)
    if c.shape != (design.n_var,):
        raise DesignError(f"shift must have length {design.n_var}")
    x = np.mod(design.points + c, 1.0)
    # fmod of tiny negatives can round up to exactly 1.0
    x[x >= 1.0] = 0.0
    return Design(x)
