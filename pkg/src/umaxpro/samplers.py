"""Baseline point sets: simple random sampling, random LHS and Halton."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .design import Design, LhsDesign, Placement, translate_mod1

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
          73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def srs(n: int, d: int, seed=None) -> Design:
    """``n`` i.i.d. uniform points in [0, 1)^d."""
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    return Design(_rng(seed).random((n, d)))


def random_lhs(n: int, d: int, seed=None, placement=Placement.MEDIAN) -> LhsDesign:
    """Latin hypercube with independent uniform random permutations per dimension."""
    rng = _rng(seed)
    levels = np.column_stack([rng.permutation(n) for _ in range(d)])
    placement = Placement(placement)
    if placement is Placement.RANDOM:
        offsets = rng.random((n, d))
        # Generator.random is in [0, 1); keep offsets off the stratum edge
        offsets[offsets == 0.0] = 0.5
        return LhsDesign(levels, placement, offsets)
    return LhsDesign(levels)


def radical_inverse(index, base: int):
    """Digit reversal of ``index`` in ``base`` mirrored about the radix point.

    Accepts a scalar or an integer array.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    idx = np.asarray(index, dtype=np.int64)
    if np.any(idx < 0):
        raise ValueError("index must be non-negative")
    out = np.zeros(idx.shape)
    inv = 1.0 / base
    scale = inv
    rest = idx.copy()
    while np.any(rest > 0):
        out += (rest % base) * scale
        rest //= base
        scale *= inv
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class HaltonSpec:
    start_index: int = 1
    shift: Optional[tuple] = None

    def __post_init__(self):
        if self.start_index < 1:
            raise ValueError("start_index must be >= 1 (index 0 is the origin)")
        if self.shift is not None:
            shift = tuple(float(c) for c in self.shift)
            if any(not 0.0 <= c < 1.0 for c in shift):
                raise ValueError("shift components must lie in [0, 1)")
            object.__setattr__(self, "shift", shift)


def halton(n: int, d: int, spec: HaltonSpec = HaltonSpec(), seed=None) -> Design:
    """Halton points ``start_index .. start_index + n - 1`` with prime bases per dimension.

    A stored ``spec.shift`` takes precedence; otherwise, when ``seed`` is given, a
    uniform random shift (mod 1) is drawn from it.
    """
    if d > len(PRIMES):
        raise ValueError(f"halton supports at most {len(PRIMES)} dimensions, got {d}")
    idx = np.arange(spec.start_index, spec.start_index + n, dtype=np.int64)
    pts = np.column_stack([radical_inverse(idx, PRIMES[v]) for v in range(d)])
    design = Design(pts)
    shift = spec.shift
    if shift is None and seed is not None:
        shift = _rng(seed).random(d)
    if shift is None:
        return design
    if len(shift) != d:
        raise ValueError(f"shift has length {len(shift)}, expected {d}")
    return translate_mod1(design, shift)


def halton_points(n: int, d: int, start_index: int = 1) -> np.ndarray:
    """Unshifted Halton coordinates as a bare array (no Design validation)."""
    idx = np.arange(start_index, start_index + n, dtype=np.int64)
    return np.column_stack([radical_inverse(idx, PRIMES[v]) for v in range(d)])


def first_primes(k: int) -> Sequence[int]:
    return PRIMES[:k]
