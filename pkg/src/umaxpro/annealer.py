"""Simulated annealing over LHS coordinate swaps, followed by greedy polish."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels as K
from .criteria import CriterionSpec, CriterionState
from .design import LhsDesign, Placement
from .samplers import random_lhs

THREADS_ENV = "UMAXPRO_THREADS"

TARGET_UPHILL_ACCEPTANCE = 0.8
N_TEMPERATURE_SAMPLES = 200


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class Schedule:
    """Geometric cooling schedule.

    ``None`` fields are resolved per problem: ``t_init`` from sampled swap
    deltas, ``moves_per_temperature`` as 20 * n_sim * n_var and ``t_min`` as
    1e-6 * t_init.
    """

    t_init: Optional[float] = None
    alpha: float = 0.95
    moves_per_temperature: Optional[int] = None
    t_min: Optional[float] = None
    stall_limit: int = 30

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ScheduleError(f"cooling ratio must be in (0, 1), got {self.alpha}")
        if self.t_init is not None and not self.t_init > 0:
            raise ScheduleError(f"t_init must be positive, got {self.t_init}")
        if self.t_min is not None and not self.t_min > 0:
            raise ScheduleError(f"t_min must be positive, got {self.t_min}")
        if self.t_init is not None and self.t_min is not None and self.t_min >= self.t_init:
            raise ScheduleError(f"t_min {self.t_min} must be below t_init {self.t_init}")
        if self.moves_per_temperature is not None and self.moves_per_temperature < 1:
            raise ScheduleError("moves_per_temperature must be positive")
        if self.stall_limit < 1:
            raise ScheduleError("stall_limit must be positive")

    def resolved(self, n_sim: int, n_var: int, t_init: float) -> "Schedule":
        moves = self.moves_per_temperature or 20 * n_sim * n_var
        t_min = self.t_min if self.t_min is not None else 1e-6 * t_init
        if t_min >= t_init:
            raise ScheduleError(f"t_min {t_min} must be below t_init {t_init}")
        return replace(self, t_init=t_init, moves_per_temperature=moves, t_min=t_min)

    def as_dict(self) -> dict:
        return {
            "t_init": self.t_init,
            "alpha": self.alpha,
            "moves_per_temperature": self.moves_per_temperature,
            "t_min": self.t_min,
            "stall_limit": self.stall_limit,
        }


@dataclass
class OptResult:
    best: LhsDesign
    best_value: float
    initial_value: float
    history: List[Tuple[float, float, float]]  # (temperature, current, best)
    accepted: int
    uphill_accepted: int
    rejected: int
    seed: Optional[int]
    schedule: Schedule
    polish_swaps: int
    criterion: CriterionSpec = field(default_factory=CriterionSpec)
    run: Optional[int] = None


def run_rng(master_seed: int, run: Optional[int] = None) -> np.random.Generator:
    """Generator for a run; run ``r`` of a batch uses stream (master_seed, r)."""
    entropy = [int(master_seed)] if run is None else [int(master_seed), int(run)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def _draw_moves(rng: np.random.Generator, m: int, n: int, d: int):
    vs = rng.integers(0, d, size=m)
    as_ = rng.integers(0, n, size=m)
    bs = (as_ + rng.integers(1, n, size=m)) % n
    us = rng.random(m)
    return vs, as_, bs, us


def temperature_from_deltas(deltas: Sequence[float], fallback: float) -> float:
    """Initial temperature that accepts the mean uphill move with probability 0.8."""
    deltas = np.asarray(deltas, dtype=float)
    up = deltas[np.isfinite(deltas) & (deltas > 0.0)]
    if up.size == 0:
        return fallback
    return float(np.mean(up) / math.log(1.0 / TARGET_UPHILL_ACCEPTANCE))


def _fallback_temperature(value: float) -> float:
    t = abs(value) * 0.01
    return t if t > 0 else 1e-3


def auto_initial_temperature(initial: LhsDesign, spec: CriterionSpec, seed) -> float:
    """Pick T0 from 200 random swap deltas of ``initial``.

    ``seed`` may be an integer or a ``numpy.random.Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else run_rng(seed)
    state = CriterionState(initial, spec)
    if state.n_sim < 2:
        return _fallback_temperature(state.value)
    vs, as_, bs, _ = _draw_moves(rng, N_TEMPERATURE_SAMPLES, state.n_sim, state.n_var)
    deltas = K.sample_deltas(state.x, state.terms, state.total, state.kind, state.spec.periodic,
                             state.k, state.npairs, vs, as_, bs, state._buf_a, state._buf_b)
    return temperature_from_deltas(deltas, _fallback_temperature(state.value))


def _polish_state(state: CriterionState) -> int:
    S, _, swaps = K.greedy_sweeps(state.x, state.levels, state.offsets, state.terms, state.total,
                                  state.kind, state.spec.periodic, state.k, state.npairs,
                                  state._buf_a, state._buf_b, state.refresh_every)
    state.total = S
    state.since_refresh = 0
    return swaps


def greedy_polish(design: LhsDesign, spec: CriterionSpec) -> Tuple[LhsDesign, int]:
    """Descend until no single coordinate swap strictly improves the objective.

    Returns the polished design and the number of swaps applied.  An
    improvement counts as strict when it exceeds a relative 1e-12.
    """
    state = CriterionState(design, spec)
    swaps = _polish_state(state)
    return state.lhs(), swaps


def optimize(
    initial: LhsDesign,
    spec: CriterionSpec,
    sched: Schedule = Schedule(),
    seed: int = 0,
    rng: Optional[np.random.Generator] = None,
    polish: bool = True,
) -> OptResult:
    """Anneal ``initial`` under ``spec`` and return the best design seen.

    The run is a deterministic function of its arguments.  Moves draw a
    dimension and an ordered row pair uniformly; uphill moves are accepted
    with probability exp(-delta / T) and T shrinks by ``alpha`` after each
    block of ``moves_per_temperature`` proposals.  Annealing stops once T
    falls below ``t_min`` or after ``stall_limit`` levels without a new best.
    """
    if rng is None:
        rng = run_rng(seed)
    state = CriterionState(initial, spec)
    initial_value = state.value
    if not math.isfinite(initial_value) and not spec.is_maximin:
        raise ValueError(f"initial design has an infinite objective: {initial_value!r}")
    n, d = state.n_sim, state.n_var

    t_init = sched.t_init
    if t_init is None:
        t_init = auto_initial_temperature(initial, spec, rng)
    sched = sched.resolved(n, d, t_init)

    best_lv = state.levels.copy()
    best_off = state.offsets.copy()
    best_val = initial_value
    history = [(float(t_init), initial_value, initial_value)]
    n_acc = n_up = n_rej = 0
    since = 0
    temp = t_init
    stall = 0
    npairs = state.npairs
    while temp >= sched.t_min and stall < sched.stall_limit:
        vs, as_, bs, us = _draw_moves(rng, sched.moves_per_temperature, n, d)
        prev_best = best_val
        S, cur, best_val, acc, up, rej, since = K.anneal_level(
            state.x, state.levels, state.offsets, state.terms, state.total,
            state.kind, spec.periodic, state.k, npairs, temp,
            vs, as_, bs, us, best_lv, best_off, best_val,
            state._buf_a, state._buf_b, state.refresh_every, since,
        )
        state.total = S
        n_acc += acc
        n_up += up
        n_rej += rej
        if best_val < prev_best:
            # re-evaluate the stored best so the trace carries exact values
            best_val = _fresh_value(best_lv, best_off, state)
            stall = 0
        else:
            stall += 1
        history.append((float(temp), float(cur), float(best_val)))
        temp *= sched.alpha

    best_state = CriterionState(_as_lhs(best_lv, best_off, state.placement), spec)
    polish_swaps = 0
    if polish:
        polish_swaps = _polish_state(best_state)
        history.append((0.0, best_state.value, best_state.value))
    return OptResult(
        best=best_state.lhs(),
        best_value=best_state.value,
        initial_value=initial_value,
        history=history,
        accepted=n_acc,
        uphill_accepted=n_up,
        rejected=n_rej,
        seed=seed,
        schedule=sched,
        polish_swaps=polish_swaps,
        criterion=spec,
    )


def _as_lhs(levels, offsets, placement) -> LhsDesign:
    if placement is Placement.RANDOM:
        return LhsDesign(levels.copy(), placement, offsets.copy())
    return LhsDesign(levels.copy(), Placement.MEDIAN)


def _fresh_value(levels, offsets, state: CriterionState) -> float:
    x = (levels + offsets) / state.n_sim
    T = K.fill_terms(x, state.kind, state.spec.periodic, state.k)
    S = K.reduce_terms(T, state.kind)
    return float(K.objective(S, state.kind, state.npairs, state.n_var, state.k))


# ---------------------------------------------------------------------------
# batches


def optimize_run(n_sim: int, n_var: int, spec: CriterionSpec, sched: Schedule,
                 master_seed: int, run: int, placement=Placement.MEDIAN) -> OptResult:
    """Run ``run`` of a batch: random initial LHS, then anneal, both from stream (seed, run)."""
    rng = run_rng(master_seed, run)
    initial = random_lhs(n_sim, n_var, rng, placement)
    res = optimize(initial, spec, sched, seed=master_seed, rng=rng)
    res.run = run
    return res


def _run_task(args):
    return optimize_run(*args)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def optimize_batch(n_sim: int, n_var: int, spec: CriterionSpec, n_runs: int,
                   master_seed: int, sched: Schedule = Schedule(),
                   placement=Placement.MEDIAN, workers: Optional[int] = None,
                   first_run: int = 0) -> List[OptResult]:
    """Independent optimized designs, merged in run order regardless of worker count."""
    workers = default_workers() if workers is None else workers
    tasks = [(n_sim, n_var, spec, sched, master_seed, r, placement)
             for r in range(first_run, first_run + n_runs)]
    if workers <= 1 or n_runs <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks, chunksize=max(1, n_runs // (4 * workers))))
