import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from umaxpro.criteria import maximin_value, umaxpro_value
from umaxpro.design import Placement, realize, translate_mod1, validate_lhs
from umaxpro.discrepancy import wd2_squared
from umaxpro.samplers import PRIMES, HaltonSpec, halton, radical_inverse, random_lhs, srs


def exact_radical_inverse(i, b):
    out, scale = Fraction(0), Fraction(1, b)
    while i:
        i, digit = divmod(i, b)
        out += digit * scale
        scale /= b
    return out


# -- srs -------------------------------------------------------------------------


def test_srs_deterministic_and_shapes():
    assert srs(5, 3, 7) == srs(5, 3, 7)
    assert srs(5, 3, 7) != srs(5, 3, 8)
    assert srs(1, 2, 0).points.shape == (1, 2)
    with pytest.raises(ValueError):
        srs(0, 2, 0)


def test_srs_pooled_uniformity():
    x = srs(100_000, 1, 3).points.ravel()
    counts = np.bincount((x * 10).astype(int), minlength=10)
    assert stats.chisquare(counts).pvalue > 0.01


# -- random_lhs -------------------------------------------------------------------


@given(st.integers(2, 20), st.integers(1, 6), st.integers(0, 2**32 - 1), st.booleans())
def test_random_lhs_is_lhs(n, d, seed, rnd):
    lhs = random_lhs(n, d, seed, Placement.RANDOM if rnd else Placement.MEDIAN)
    pts = realize(lhs).points
    assert validate_lhs(realize(lhs), n).is_lhs
    assert np.all((pts >= 0) & (pts < 1))


def test_random_lhs_two_points():
    seen = set()
    for s in range(20):
        seen.add(tuple(realize(random_lhs(2, 1, s)).points[:, 0]))
    assert seen == {(0.25, 0.75), (0.75, 0.25)}


def test_random_lhs_permutation_distribution():
    counts = {p: 0 for p in itertools.permutations(range(3))}
    for s in range(12_000):
        counts[tuple(random_lhs(3, 1, s).levels[:, 0])] += 1
    assert all(1800 <= c <= 2200 for c in counts.values()), counts


# -- radical inverse ----------------------------------------------------------------


def test_radical_inverse_examples():
    assert radical_inverse(1, 2) == 0.5
    assert radical_inverse(3, 2) == 0.75
    assert radical_inverse(5, 3) == pytest.approx(2 / 3 + 1 / 9, abs=1e-15)
    assert radical_inverse(0, 7) == 0.0
    with pytest.raises(ValueError):
        radical_inverse(1, 1)


@given(st.integers(0, 10**9), st.sampled_from(PRIMES[:12]))
def test_radical_inverse_matches_exact(i, b):
    assert radical_inverse(i, b) == pytest.approx(float(exact_radical_inverse(i, b)), abs=1e-15)


def test_radical_inverse_vectorized():
    idx = np.arange(50)
    np.testing.assert_array_equal(radical_inverse(idx, 3), [radical_inverse(int(i), 3) for i in idx])


# -- halton ----------------------------------------------------------------------


def test_halton_first_points():
    np.testing.assert_array_equal(halton(3, 1).points[:, 0], [0.5, 0.25, 0.75])
    p = halton(2, 2).points
    np.testing.assert_allclose(p[:, 1], [1 / 3, 2 / 3])


def test_halton_zero_shift_identity():
    assert halton(10, 3, HaltonSpec(shift=(0.0, 0.0, 0.0))) == halton(10, 3)


def test_halton_dyadic_strata():
    for start in (1, 9):
        x = halton(8, 1, HaltonSpec(start_index=start)).points[:, 0]
        assert sorted(np.floor(x * 8).astype(int)) == list(range(8))


def test_halton_shift_is_translation():
    c = (0.3, 0.71, 0.05)
    plain, shifted = halton(16, 3), halton(16, 3, HaltonSpec(shift=c))
    assert shifted == translate_mod1(plain, c)
    assert umaxpro_value(shifted) == pytest.approx(umaxpro_value(plain), rel=1e-9)
    assert maximin_value(shifted, "periodic") == pytest.approx(maximin_value(plain, "periodic"), rel=1e-9)
    assert wd2_squared(shifted) == pytest.approx(wd2_squared(plain), rel=1e-9)


def test_halton_seeded_shift_reproducible():
    assert halton(8, 2, seed=4) == halton(8, 2, seed=4)
    assert halton(8, 2, seed=4) != halton(8, 2)
    # a stored shift wins over the seed
    assert halton(8, 2, HaltonSpec(shift=(0.1, 0.2)), seed=4) == halton(8, 2, HaltonSpec(shift=(0.1, 0.2)))


def test_halton_errors():
    with pytest.raises(ValueError):
        halton(4, len(PRIMES) + 1)
    with pytest.raises(ValueError):
        HaltonSpec(start_index=0)
    with pytest.raises(ValueError):
        HaltonSpec(shift=(1.0,))
    with pytest.raises(ValueError):
        halton(4, 2, HaltonSpec(shift=(0.1,)))
    assert len(PRIMES) >= 16
