"""Reference metaheuristics: global-best PSO, Grey Wolf Optimizer and TLBO.

Each ``*_run(cfg, obj, seed, budget=None)`` returns a :class:`RunResult`
whose trace holds the best-so-far value after initialization and after
every iteration. A run stops at ``cfg.max_iters`` or as soon as the next
iteration would overrun the evaluation budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    ConfigError,
    EvalCounter,
    Objective,
    RngStream,
    RunResult,
    clamp_to_bounds,
    evaluate_batch,
)

__all__ = [
    "PsoConfig",
    "GwoConfig",
    "TlboConfig",
    "pso_run",
    "gwo_run",
    "tlbo_run",
    "gwo_a_schedule",
    "teaching_factor",
    "teacher_step",
]


def _check_common(size, max_iters, what):
    if int(size) != size or size < 2:
        raise ConfigError("%s must be an integer >= 2, got %r" % (what, size))
    if max_iters is not None and (int(max_iters) != max_iters or max_iters < 0):
        raise ConfigError("max_iters must be a non-negative integer or None")


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 40
    inertia: float = 0.729
    c1: float = 1.49445
    c2: float = 1.49445
    # max |velocity| per dimension as a fraction of the box width
    velocity_clamp: float = 0.2
    max_iters: Optional[int] = None

    def __post_init__(self):
        _check_common(self.swarm_size, self.max_iters, "swarm_size")
        if not 0 < self.velocity_clamp <= 1:
            raise ConfigError("velocity_clamp must be in (0, 1], got %r" % self.velocity_clamp)

    @property
    def population_size(self):
        return self.swarm_size


@dataclass(frozen=True)
class GwoConfig:
    pack_size: int = 30
    a_start: float = 2.0
    a_end: float = 0.0
    max_iters: Optional[int] = None

    def __post_init__(self):
        _check_common(self.pack_size, self.max_iters, "pack_size")

    @property
    def population_size(self):
        return self.pack_size


@dataclass(frozen=True)
class TlboConfig:
    class_size: int = 30
    max_iters: Optional[int] = None

    def __post_init__(self):
        _check_common(self.class_size, self.max_iters, "class_size")

    @property
    def population_size(self):
        return self.class_size


def _iteration_limit(max_iters, budget, init_cost, per_iter):
    """Iterations allowed by ``max_iters`` and by what the budget leaves after init."""
    limits = []
    if max_iters is not None:
        limits.append(max_iters)
    if budget is not None:
        limits.append(max(0, (budget - init_cost) // per_iter))
    if not limits:
        raise ConfigError("either max_iters or an evaluation budget is required")
    return min(limits)


class _Tracker:
    def __init__(self):
        self.best_value = np.inf
        self.best_point = None
        self.trace = []

    def offer(self, X, f):
        i = int(np.argmin(f))
        if f[i] < self.best_value:
            self.best_value = float(f[i])
            self.best_point = X[i].copy()

    def record(self):
        self.trace.append(self.best_value)

    def result(self, reason, counter):
        return RunResult(self.best_point, self.best_value, self.trace, reason, counter.used)


def _random_population(space, rng, n):
    return space.lower + rng.uniform((n, space.dim)) * space.width


def _stop_reason(iters, cfg_max):
    return "max_iters" if cfg_max is not None and iters >= cfg_max else "budget"


def pso_run(cfg: PsoConfig, obj: Objective, seed: int, budget: Optional[int] = None) -> RunResult:
    """Global-best PSO: ``v = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)``.

    Velocities start at zero and are clipped per dimension to
    ``velocity_clamp * width``.
    """
    space, n, d = obj.space, cfg.swarm_size, obj.space.dim
    counter = EvalCounter(budget)
    rng = RngStream(seed, 11)
    iters = _iteration_limit(cfg.max_iters, budget, n, n)
    vmax = cfg.velocity_clamp * space.width

    X = _random_population(space, rng, n)
    V = np.zeros((n, d))
    f = evaluate_batch(obj, X, counter)
    pbest, pbest_f = X.copy(), f.copy()
    best = _Tracker()
    best.offer(X, f)
    best.record()

    for _ in range(iters):
        g = pbest[int(np.argmin(pbest_f))]
        r1, r2 = rng.uniform((n, d)), rng.uniform((n, d))
        V = cfg.inertia * V + cfg.c1 * r1 * (pbest - X) + cfg.c2 * r2 * (g - X)
        V = np.clip(V, -vmax, vmax)
        X = clamp_to_bounds(X + V, space)
        f = evaluate_batch(obj, X, counter)
        better = f < pbest_f
        pbest[better], pbest_f[better] = X[better], f[better]
        best.offer(X, f)
        best.record()
    return best.result(_stop_reason(iters, cfg.max_iters), counter)


def gwo_a_schedule(t: int, t_max: int, a_start: float = 2.0, a_end: float = 0.0) -> float:
    """Linear decrease of the GWO control parameter ``a`` from ``a_start`` to ``a_end``."""
    if t_max <= 0:
        return a_start
    frac = t / t_max
    return a_start + (a_end - a_start) * frac


def _leaders(X, f, k=3):
    order = np.argsort(f, kind="stable")[:k]
    if len(order) < k:
        order = np.concatenate([order, np.repeat(order[-1:], k - len(order))])
    return X[order].copy(), f[order].copy()


def gwo_run(cfg: GwoConfig, obj: Objective, seed: int, budget: Optional[int] = None) -> RunResult:
    """Grey Wolf Optimizer with alpha/beta/delta encircling.

    Every wolf moves to the mean of ``X_l - A |C X_l - X|`` over the three
    leaders; leaders are the three best positions seen so far.
    """
    space, n, d = obj.space, cfg.pack_size, obj.space.dim
    counter = EvalCounter(budget)
    rng = RngStream(seed, 12)
    iters = _iteration_limit(cfg.max_iters, budget, n, n)

    X = _random_population(space, rng, n)
    f = evaluate_batch(obj, X, counter)
    lead_X, lead_f = _leaders(X, f)
    best = _Tracker()
    best.offer(X, f)
    best.record()

    for t in range(iters):
        a = gwo_a_schedule(t, iters, cfg.a_start, cfg.a_end)
        X = _gwo_move(X, lead_X, a, rng)
        X = clamp_to_bounds(X, space)
        f = evaluate_batch(obj, X, counter)
        lead_X, lead_f = _leaders(np.vstack([lead_X, X]), np.concatenate([lead_f, f]))
        best.offer(X, f)
        best.record()
    return best.result(_stop_reason(iters, cfg.max_iters), counter)


def _gwo_move(X, leaders, a, rng):
    n, d = X.shape
    moved = np.zeros_like(X)
    for leader in leaders:
        A = 2.0 * a * rng.uniform((n, d)) - a
        C = 2.0 * rng.uniform((n, d))
        D = np.abs(C * leader - X)
        moved += leader - A * D
    return moved / len(leaders)


def teaching_factor(rng: RngStream, size=None):
    """``TF = round(1 + rand)``, so 1 or 2 with equal probability."""
    return np.round(1.0 + rng.uniform(size)).astype(int)


def teacher_step(X, f, tf, r):
    """Unclipped teacher-phase candidates ``X + r (teacher - TF * mean)``."""
    teacher = X[int(np.argmin(f))]
    return X + r * (teacher - tf * X.mean(axis=0))


def tlbo_run(cfg: TlboConfig, obj: Objective, seed: int, budget: Optional[int] = None) -> RunResult:
    """Teaching-learning-based optimization with greedy acceptance in both phases.

    Teacher phase: ``x + r (teacher - TF * mean)``. Learner phase: each
    student steps toward a random better peer or away from a worse one.
    One iteration costs ``2 * class_size`` evaluations.
    """
    space, n, d = obj.space, cfg.class_size, obj.space.dim
    counter = EvalCounter(budget)
    rng = RngStream(seed, 13)
    iters = _iteration_limit(cfg.max_iters, budget, n, 2 * n)

    X = _random_population(space, rng, n)
    f = evaluate_batch(obj, X, counter)
    best = _Tracker()
    best.offer(X, f)
    best.record()

    for _ in range(iters):
        tf = teaching_factor(rng, (n, 1))
        cand = clamp_to_bounds(teacher_step(X, f, tf, rng.uniform((n, d))), space)
        X, f = _greedy(X, f, cand, evaluate_batch(obj, cand, counter))

        partner = (np.arange(n) + rng.integers(1, n, size=n)) % n
        Xp, fp = X[partner], f[partner]
        direction = np.where((f < fp)[:, None], X - Xp, Xp - X)
        cand = clamp_to_bounds(X + rng.uniform((n, d)) * direction, space)
        X, f = _greedy(X, f, cand, evaluate_batch(obj, cand, counter))

        best.offer(X, f)
        best.record()
    return best.result(_stop_reason(iters, cfg.max_iters), counter)


def _greedy(X, f, cand, cand_f):
    accept = cand_f < f
    return np.where(accept[:, None], cand, X), np.where(accept, cand_f, f)
