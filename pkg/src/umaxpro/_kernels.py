"""Compiled inner loops for pair-term criteria and coordinate-swap search.

All kernels work on a dense coordinate matrix ``x`` (n x d) and a symmetric
matrix ``T`` of cached per-pair terms.  ``kind`` selects the pair term:

* ``PROJ`` (MaxPro family): 1 / prod_v delta_v^2, aggregated as (S / C)^(1/d)
* ``MM`` (Morris-Mitchell): (sum_v delta_v^2)^(-k/2), aggregated as (S / C)^(1/k)
* ``MAXIMIN``: sqrt(sum_v delta_v^2); the objective is minus the smallest term

For PROJ and MM the running scalar ``S`` is the pair sum; for MAXIMIN it is the
current minimum distance.
"""

import math

import numpy as np
from numba import njit

PROJ = 0
MM = 1
MAXIMIN = 2

# relative margin a move must beat to count as a strict improvement
IMPROVE_RTOL = 1e-12


@njit(cache=True)
def pair_term(x, i, j, kind, periodic, k):
    d = x.shape[1]
    if kind == PROJ:
        prod = 1.0
        for v in range(d):
            dl = abs(x[i, v] - x[j, v])
            if periodic and dl > 0.5:
                dl = 1.0 - dl
            prod *= dl * dl
        if prod == 0.0:
            return np.inf
        return 1.0 / prod
    s = 0.0
    for v in range(d):
        dl = abs(x[i, v] - x[j, v])
        if periodic and dl > 0.5:
            dl = 1.0 - dl
        s += dl * dl
    if kind == MM:
        if s == 0.0:
            return np.inf
        return s ** (-0.5 * k)
    return math.sqrt(s)


@njit(cache=True)
def fill_terms(x, kind, periodic, k):
    n = x.shape[0]
    T = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            t = pair_term(x, i, j, kind, periodic, k)
            T[i, j] = t
            T[j, i] = t
    return T


@njit(cache=True)
def reduce_terms(T, kind):
    """Pair sum (PROJ, MM) or minimum (MAXIMIN) over i < j, in index order."""
    n = T.shape[0]
    if kind == MAXIMIN:
        m = np.inf
        for i in range(n):
            for j in range(i + 1, n):
                if T[i, j] < m:
                    m = T[i, j]
        return m
    s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += T[i, j]
    return s


@njit(cache=True)
def objective(S, kind, npairs, d, k):
    if kind == MAXIMIN:
        return -S
    if S == np.inf:
        return np.inf
    if kind == PROJ:
        return (S / npairs) ** (1.0 / d)
    return (S / npairs) ** (1.0 / k)


@njit(cache=True)
def trial_swap(x, T, S, v, a, b, kind, periodic, k, new_a, new_b):
    """Aggregate after exchanging x[a, v] and x[b, v]; fills new_a/new_b rows.

    ``x`` is left unchanged on return.
    """
    n = x.shape[0]
    tmp = x[a, v]
    x[a, v] = x[b, v]
    x[b, v] = tmp
    if kind == MAXIMIN:
        m = np.inf
        for j in range(n):
            if j == a or j == b:
                continue
            ta = pair_term(x, a, j, kind, periodic, k)
            tb = pair_term(x, b, j, kind, periodic, k)
            new_a[j] = ta
            new_b[j] = tb
            if ta < m:
                m = ta
            if tb < m:
                m = tb
        tab = pair_term(x, a, b, kind, periodic, k)
        new_a[b] = tab
        new_b[a] = tab
        if tab < m:
            m = tab
        for i in range(n):
            if i == a or i == b:
                continue
            for j in range(i + 1, n):
                if j == a or j == b:
                    continue
                if T[i, j] < m:
                    m = T[i, j]
        S_new = m
    else:
        old = 0.0
        new = 0.0
        for j in range(n):
            if j == a or j == b:
                continue
            ta = pair_term(x, a, j, kind, periodic, k)
            tb = pair_term(x, b, j, kind, periodic, k)
            new_a[j] = ta
            new_b[j] = tb
            old += T[a, j] + T[b, j]
            new += ta + tb
        tab = pair_term(x, a, b, kind, periodic, k)
        new_a[b] = tab
        new_b[a] = tab
        old += T[a, b]
        new += tab
        if new == np.inf:
            S_new = np.inf
        else:
            S_new = S - old + new
    x[b, v] = x[a, v]
    x[a, v] = tmp
    return S_new


@njit(cache=True)
def commit_swap(x, lv, off, T, v, a, b, new_a, new_b):
    n = x.shape[0]
    tmp = x[a, v]
    x[a, v] = x[b, v]
    x[b, v] = tmp
    ti = lv[a, v]
    lv[a, v] = lv[b, v]
    lv[b, v] = ti
    tmp = off[a, v]
    off[a, v] = off[b, v]
    off[b, v] = tmp
    for j in range(n):
        if j == a or j == b:
            continue
        T[a, j] = new_a[j]
        T[j, a] = new_a[j]
        T[b, j] = new_b[j]
        T[j, b] = new_b[j]
    T[a, b] = new_a[b]
    T[b, a] = new_a[b]


@njit(cache=True)
def anneal_level(
    x, lv, off, T, S, kind, periodic, k, npairs, temp,
    vs, as_, bs, us, best_lv, best_off, best_val,
    new_a, new_b, refresh_every, since_refresh,
):
    """Run one temperature level of Metropolis coordinate swaps.

    Returns (S, current value, best value, accepted, uphill accepted,
    rejected, accepted swaps since the last full refresh).
    """
    d = x.shape[1]
    cur = objective(S, kind, npairs, d, k)
    n_acc = 0
    n_up = 0
    n_rej = 0
    for m in range(vs.shape[0]):
        v = vs[m]
        a = as_[m]
        b = bs[m]
        S_new = trial_swap(x, T, S, v, a, b, kind, periodic, k, new_a, new_b)
        val = objective(S_new, kind, npairs, d, k)
        dobj = val - cur
        if val == np.inf:
            accept = False
        elif dobj <= 0.0:
            accept = True
        else:
            accept = us[m] < math.exp(-dobj / temp)
        if not accept:
            n_rej += 1
            continue
        commit_swap(x, lv, off, T, v, a, b, new_a, new_b)
        n_acc += 1
        if dobj > 0.0:
            n_up += 1
        S = S_new
        cur = val
        since_refresh += 1
        if since_refresh >= refresh_every:
            S = reduce_terms(T, kind)
            cur = objective(S, kind, npairs, d, k)
            since_refresh = 0
        if cur < best_val - IMPROVE_RTOL * abs(best_val):
            best_val = cur
            best_lv[:, :] = lv
            best_off[:, :] = off
    return S, cur, best_val, n_acc, n_up, n_rej, since_refresh


@njit(cache=True)
def greedy_sweeps(x, lv, off, T, S, kind, periodic, k, npairs, new_a, new_b, refresh_every):
    """First-improvement descent over all single coordinate swaps.

    Stops after a full sweep without a strict improvement.  Returns
    (S, value, swaps applied).
    """
    n, d = x.shape
    cur = objective(S, kind, npairs, d, k)
    swaps = 0
    since = 0
    improved = True
    while improved:
        improved = False
        for v in range(d):
            for a in range(n):
                for b in range(a + 1, n):
                    S_new = trial_swap(x, T, S, v, a, b, kind, periodic, k, new_a, new_b)
                    val = objective(S_new, kind, npairs, d, k)
                    if val < cur - IMPROVE_RTOL * abs(cur):
                        commit_swap(x, lv, off, T, v, a, b, new_a, new_b)
                        S = S_new
                        cur = val
                        swaps += 1
                        improved = True
                        since += 1
                        if since >= refresh_every:
                            S = reduce_terms(T, kind)
                            cur = objective(S, kind, npairs, d, k)
                            since = 0
    S = reduce_terms(T, kind)
    cur = objective(S, kind, npairs, d, k)
    return S, cur, swaps


@njit(cache=True)
def sample_deltas(x, T, S, kind, periodic, k, npairs, vs, as_, bs, new_a, new_b):
    """Objective changes of proposed swaps, without applying any of them."""
    d = x.shape[1]
    cur = objective(S, kind, npairs, d, k)
    out = np.empty(vs.shape[0])
    for m in range(vs.shape[0]):
        S_new = trial_swap(x, T, S, vs[m], as_[m], bs[m], kind, periodic, k, new_a, new_b)
        out[m] = objective(S_new, kind, npairs, d, k) - cur
    return out
