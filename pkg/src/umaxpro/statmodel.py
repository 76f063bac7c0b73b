"""Transforms from the unit cube to physical inputs.

Normal and lognormal marginals are parameterized by the mean and standard
deviation of the physical variable.  Dependence is a Gaussian copula: the
correlation matrix acts on the underlying standard-normal layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy import special


class TransformError(ValueError):
    pass


class MarginalKind(str, Enum):
    NORMAL = "normal"
    LOGNORMAL = "lognormal"


@dataclass(frozen=True)
class Marginal:
    kind: MarginalKind
    mean: float
    std: float

    def __post_init__(self):
        kind = MarginalKind(self.kind)
        if not self.std > 0:
            raise TransformError(f"std must be positive, got {self.std}")
        if kind is MarginalKind.LOGNORMAL and not self.mean > 0:
            raise TransformError(f"lognormal mean must be positive, got {self.mean}")
        object.__setattr__(self, "kind", kind)

    @property
    def log_params(self):
        """(mu, sigma) of ln X for a lognormal with this mean and std."""
        s2 = math.log1p((self.std / self.mean) ** 2)
        return math.log(self.mean) - 0.5 * s2, math.sqrt(s2)


def _check_prob(p):
    p = np.asarray(p, dtype=float)
    if np.any(~(p > 0.0) | ~(p < 1.0)):
        raise TransformError("probabilities must lie strictly inside (0, 1)")
    return p


def _unwrap(x):
    return float(x) if np.ndim(x) == 0 else x


def std_normal_inv_cdf(p):
    """Standard normal quantile."""
    return _unwrap(special.ndtri(_check_prob(p)))


def std_normal_cdf(z):
    return _unwrap(special.ndtr(np.asarray(z, dtype=float)))


def marginal_inv_cdf(m: Marginal, p):
    z = std_normal_inv_cdf(p)
    if m.kind is MarginalKind.NORMAL:
        return m.mean + m.std * z
    mu, sigma = m.log_params
    return _unwrap(np.exp(mu + sigma * np.asarray(z)))


def cholesky(corr) -> np.ndarray:
    """Lower Cholesky factor; raises with the failing pivot for non-PD input."""
    a = np.array(corr, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise TransformError(f"correlation must be square, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12):
        raise TransformError("correlation matrix is not symmetric")
    n = a.shape[0]
    L = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - np.dot(L[j, :j], L[j, :j])
        if not pivot > 0.0:
            raise TransformError(f"matrix is not positive definite (pivot {j}: {pivot:.3g})")
        L[j, j] = math.sqrt(pivot)
        L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


@dataclass(frozen=True)
class InputModel:
    marginals: tuple
    correlation: np.ndarray

    def __post_init__(self):
        margs = tuple(m if isinstance(m, Marginal) else Marginal(**m) for m in self.marginals)
        corr = np.array(self.correlation, dtype=float)
        d = len(margs)
        if corr.shape != (d, d):
            raise TransformError(f"correlation must be {d}x{d}, got {corr.shape}")
        if not np.allclose(np.diag(corr), 1.0, rtol=0, atol=1e-12):
            raise TransformError("correlation matrix must have a unit diagonal")
        chol = cholesky(corr)
        corr.setflags(write=False)
        chol.setflags(write=False)
        object.__setattr__(self, "marginals", margs)
        object.__setattr__(self, "correlation", corr)
        object.__setattr__(self, "_chol", chol)

    @classmethod
    def independent(cls, marginals: Sequence[Marginal]) -> "InputModel":
        return cls(tuple(marginals), np.eye(len(marginals)))

    @property
    def dim(self) -> int:
        return len(self.marginals)

    @property
    def lower_factor(self) -> np.ndarray:
        return self._chol


def gaussian_layer(model: InputModel, u) -> np.ndarray:
    """Correlated standard-normal variates L @ inv_cdf(u) for rows of ``u``."""
    z = np.atleast_2d(std_normal_inv_cdf(np.atleast_2d(u)))
    if z.shape[1] != model.dim:
        raise TransformError(f"expected {model.dim} columns, got {z.shape[1]}")
    return z @ model.lower_factor.T


def copula_transform(model: InputModel, u) -> np.ndarray:
    """Map unit-cube rows to physical inputs through the Gaussian copula.

    Accepts one row or a matrix of rows and returns the same shape.
    """
    u = np.asarray(u, dtype=float)
    rows = np.atleast_2d(u)
    if np.array_equal(model.correlation, np.eye(model.dim)):
        _check_prob(rows)
        out = np.column_stack([marginal_inv_cdf(m, rows[:, v])
                               for v, m in enumerate(model.marginals)])
    else:
        zc = gaussian_layer(model, rows)
        p = special.ndtr(zc)
        # the tails of ndtr saturate at 0 or 1 beyond |z| ~ 37
        p = np.clip(p, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
        out = np.column_stack([marginal_inv_cdf(m, p[:, v]) for v, m in enumerate(model.marginals)])
    return out.reshape(u.shape)
