"""Naive reference implementations used only by the test suite.

Everything here is written with plain Python loops and the math module so it
shares no code path with the vectorized/numba implementations under test.
"""

import itertools
import math

import mpmath


def _d(a, b, periodic):
    t = abs(a - b)
    return min(t, 1.0 - t) if periodic else t


def naive_projection(points, periodic):
    n, d = len(points), len(points[0])
    total = 0.0
    pairs = 0
    for i in range(n):
        for j in range(i + 1, n):
            prod = 1.0
            for v in range(d):
                prod *= _d(points[i][v], points[j][v], periodic) ** 2
            if prod == 0.0:
                return math.inf
            total += 1.0 / prod
            pairs += 1
    return (total / pairs) ** (1.0 / d)


def naive_maxpro(points):
    return naive_projection(points, False)


def naive_umaxpro(points):
    return naive_projection(points, True)


def naive_distance(p, q, periodic):
    return math.sqrt(sum(_d(a, b, periodic) ** 2 for a, b in zip(p, q)))


def naive_maximin(points, periodic=False):
    return min(naive_distance(p, q, periodic) for p, q in itertools.combinations(points, 2))


def naive_mm(points, k, periodic=False):
    terms = [naive_distance(p, q, periodic) ** (-k) for p, q in itertools.combinations(points, 2)]
    return (sum(terms) / len(terms)) ** (1.0 / k)


def naive_wd2_squared(points):
    n, d = len(points), len(points[0])
    acc = 0.0
    for i in range(n):
        for j in range(n):
            prod = 1.0
            for v in range(d):
                t = abs(points[i][v] - points[j][v])
                prod *= 1.5 - t * (1.0 - t)
            acc += prod
    # the full double sum includes the diagonal (each 1.5^d) and both orders
    return -(4.0 / 3.0) ** d + acc / n**2


def mp_normal_quantile(p, dps=30, tol=1e-14):
    """High-precision quantile: bisection on the erfc form of the normal cdf.

    The bracket [-10, 10] covers every double p in [1e-23, 1 - 2**-53].
    """
    with mpmath.workdps(dps):
        p = mpmath.mpf(float(p))
        root2 = mpmath.sqrt(2)
        lo, hi = mpmath.mpf(-10), mpmath.mpf(10)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if mpmath.erfc(-mid / root2) / 2 < p:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


def mp_normal_cdf(z, dps=40):
    with mpmath.workdps(dps):
        return float(mpmath.erfc(-mpmath.mpf(z) / mpmath.sqrt(2)) / 2)
