"""Statistical-uniformity diagnostics pooled over many designs.

Two views are provided: visit frequencies of the N_sim^k LH bins of a
(sub)space, and a radial profile of distances from the cube center weighted
by the volume of each radial layer.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .design import SubspaceSelector, as_points, stratum_index
from .samplers import halton_points

SHELL_MC_POINTS = 2_000_000
SHELL_SEED = 20250101
DEFAULT_LAYERS = 20


def _stack(designs) -> np.ndarray:
    arrays = [as_points(D) for D in designs]
    if not arrays:
        raise ValueError("no designs given")
    shape = arrays[0].shape
    for a in arrays:
        if a.shape != shape:
            raise ValueError(f"designs differ in shape: {a.shape} vs {shape}")
    return np.stack(arrays)


@dataclass
class BinHistogram:
    dims: tuple
    n_levels: int
    counts: np.ndarray  # one axis per retained dimension
    n_run: int

    @property
    def n_bins(self) -> int:
        return self.counts.size

    @property
    def uniform_count(self) -> float:
        """Expected visits per bin, f_u = N_sim * N_run / n_b."""
        return self.n_levels * self.n_run / self.n_bins

    @property
    def relative(self) -> np.ndarray:
        return self.counts / self.uniform_count

    def chi_square(self):
        """Pearson goodness-of-fit against equal bin probabilities: (statistic, p-value)."""
        res = stats.chisquare(self.counts.ravel())
        return float(res.statistic), float(res.pvalue)

    def corner_relative(self) -> np.ndarray:
        """Relative frequencies of the 2^k corner bins."""
        k = self.counts.ndim
        top = self.n_levels - 1
        corners = np.array(np.meshgrid(*[[0, top]] * k, indexing="ij")).reshape(k, -1)
        return self.relative[tuple(corners)]

    def table(self):
        """Long-format rows: (bin index tuple, count, relative frequency)."""
        rel = self.relative
        return [(idx, int(c), float(rel[idx])) for idx, c in np.ndenumerate(self.counts)]


def bin_histogram(designs: Sequence, sel: Optional[SubspaceSelector] = None) -> BinHistogram:
    """Pool the points of ``designs`` into LH bins of the selected dimensions.

    Coordinates are binned as floor(x * N_sim); x = 1 goes to the top bin.
    """
    X = _stack(designs)
    n_run, n_sim, n_var = X.shape
    if sel is None:
        dims = tuple(range(n_var))
    else:
        sel = sel if isinstance(sel, SubspaceSelector) else SubspaceSelector(tuple(sel))
        sel.check(n_var)
        dims = sel.dims
    idx = stratum_index(X[:, :, list(dims)].reshape(-1, len(dims)), n_sim)
    flat = np.ravel_multi_index(tuple(idx.T), (n_sim,) * len(dims))
    counts = np.bincount(flat, minlength=n_sim ** len(dims)).reshape((n_sim,) * len(dims))
    return BinHistogram(dims, n_sim, counts, n_run)


def radial_edges(d: int, n_layers: int = DEFAULT_LAYERS) -> np.ndarray:
    return np.linspace(0.0, math.sqrt(d) / 2.0, n_layers + 1)


def _layer_index(r: np.ndarray, edges: np.ndarray) -> np.ndarray:
    k = np.searchsorted(edges, r, side="right") - 1
    # the last layer is closed on the right so the cube corners are counted
    return np.clip(k, 0, len(edges) - 2)


@functools.lru_cache(maxsize=32)
def _shell_volumes_cached(d: int, edges: tuple, n_mc: int, seed: int) -> np.ndarray:
    shift = np.random.default_rng(seed).random(d)
    pts = np.mod(halton_points(n_mc, d) + shift, 1.0)
    r = np.sqrt(np.sum((pts - 0.5) ** 2, axis=1))
    e = np.asarray(edges)
    inside = r < e[-1]
    counts = np.bincount(_layer_index(r[inside], e), minlength=len(e) - 1)
    return counts / n_mc


def shell_volumes(d: int, edges: Sequence[float], n_mc: int = SHELL_MC_POINTS,
                  seed: int = SHELL_SEED) -> np.ndarray:
    """Cube volume fractions at center distance in [e_k, e_k+1), by shifted Halton QMC."""
    e = np.asarray(edges, dtype=float)
    if e.ndim != 1 or len(e) < 2 or np.any(np.diff(e) <= 0):
        raise ValueError("edges must be strictly increasing with at least two entries")
    if e[-1] < math.sqrt(d) / 2.0:
        raise ValueError("last edge must reach the half-diagonal sqrt(d)/2")
    # widen the last edge slightly so the closed outer boundary is covered
    e = e.copy()
    e[-1] = np.nextafter(e[-1], np.inf)
    return _shell_volumes_cached(int(d), tuple(e), int(n_mc), int(seed)).copy()


@dataclass
class RadialProfile:
    layer_edges: np.ndarray
    counts: np.ndarray
    shell_volumes: np.ndarray
    density_ratio: np.ndarray
    delta: float

    def table(self):
        return [(k, float(self.layer_edges[k]), float(self.layer_edges[k + 1]), int(self.counts[k]),
                 float(self.shell_volumes[k]), float(self.density_ratio[k]))
                for k in range(len(self.counts))]


def radial_profile(designs: Sequence, n_layers: int = DEFAULT_LAYERS,
                   n_mc: int = SHELL_MC_POINTS, seed: int = SHELL_SEED) -> RadialProfile:
    """Pooled distance-from-center histogram and the undersampled volume delta.

    delta = sum_k vol_k * max(0, 1 - ratio_k) where ratio_k is the layer's share
    of points divided by its share of volume.
    """
    X = _stack(designs)
    d = X.shape[2]
    edges = radial_edges(d, n_layers)
    r = np.sqrt(np.sum((X.reshape(-1, d) - 0.5) ** 2, axis=1))
    counts = np.bincount(_layer_index(r, edges), minlength=n_layers)
    vol = shell_volumes(d, edges, n_mc, seed)
    share = counts / counts.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(vol > 0, share / vol, np.nan)
    deficit = np.where(vol > 0, vol * np.clip(1.0 - ratio, 0.0, None), 0.0)
    return RadialProfile(edges, counts, vol, ratio, float(np.sum(deficit)))
