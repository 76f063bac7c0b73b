"""Wrap-around L2 discrepancy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import as_points


@dataclass(frozen=True)
class Wd2Report:
    wd2_squared: float
    wd2: float
    n_sim: int
    n_var: int


def wd2_squared(design) -> float:
    """Squared wrap-around L2 discrepancy.

    The pair sum runs over i < j in index order; with one point it is empty.
    """
    pts = as_points(design)
    n, d = pts.shape
    total = -(4.0 / 3.0) ** d + (1.5 ** d) / n
    if n > 1:
        iu, ju = np.triu_indices(n, 1)
        dl = np.abs(pts[iu] - pts[ju])
        total += 2.0 / n**2 * float(np.sum(np.prod(1.5 - dl * (1.0 - dl), axis=1)))
    return total


def wd2(design) -> float:
    return math.sqrt(max(wd2_squared(design), 0.0))


def wd2_report(design) -> Wd2Report:
    pts = as_points(design)
    sq = wd2_squared(pts)
    return Wd2Report(sq, math.sqrt(max(sq, 0.0)), pts.shape[0], pts.shape[1])
