"""Neuron Synapse Optimization.

Candidate solutions ("neurons") are coupled by an N x N synapse matrix
``W`` with ``W[i, j]`` the pull of neuron j on neuron i. One iteration:

1. refresh fitness of neurons that moved last iteration
2. Hebbian strengthening of synapses between neurons that are close and
   have similar (min-max normalized) fitness
3. move every neuron toward its synaptic neighbours, plus Gaussian noise
4. prune synapses weaker than ``prune_threshold``
5. reinforce: a further step of size ``reinforcement`` along the
   surviving synapses
6. record the best value seen so far

All phases update neurons synchronously from a snapshot, positions are
clipped to the box after every change, and weights stay in ``[0, 1]`` with
a zero diagonal.
"""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    BudgetExceeded,
    ConfigError,
    EvalCounter,
    NumericError,
    Objective,
    RngStream,
    RunResult,
    SearchSpace,
    clamp_to_bounds,
    evaluate_batch,
    uniform_point,
)
from .kvconfig import build_dataclass, read_kv_file

__all__ = [
    "NsoConfig",
    "Population",
    "NsoState",
    "InvariantViolation",
    "init_state",
    "normalized_fitness",
    "hebbian_update",
    "move_neurons",
    "prune",
    "reinforce",
    "reinforce_toward_best",
    "check_convergence",
    "check_invariants",
    "step",
    "run",
    "load_config",
]

# (lower, upper) recommended ranges; outside them we only warn
_RECOMMENDED = {
    "population_size": (30, 100),
    "learning_rate": (0.01, 0.1),
    "distance_decay": (0.5, 2.0),
    "perturbation": (0.01, 0.2),
    "prune_threshold": (0.1, 0.3),
    "reinforcement": (0.05, 0.2),
    "max_iters": (100, 1000),
    "improve_tol": (1e-6, 1e-3),
}

# short names accepted in config files
ALIASES = {
    "N": "population_size",
    "n": "population_size",
    "alpha": "learning_rate",
    "beta": "distance_decay",
    "gamma": "perturbation",
    "delta": "prune_threshold",
    "eta": "reinforcement",
    "T_max": "max_iters",
    "t_max": "max_iters",
    "epsilon": "improve_tol",
    "eps": "improve_tol",
}


@dataclass(frozen=True)
class NsoConfig:
    population_size: int = 50
    learning_rate: float = 0.05
    distance_decay: float = 1.0
    perturbation: float = 0.1
    prune_threshold: float = 0.2
    reinforcement: float = 0.1
    max_iters: int = 500
    improve_tol: float = 1e-6
    stagnation_window: int = 20
    perturbation_scaling: str = "none"
    seed: int = 0
    # unnormalized sum_j w_ij (x_j - x_i) pull, as literally written; diverges for large N
    literal_pull: bool = False
    # "connections": step along all surviving synapses; "best": step toward the
    # evaluated position of the fittest surviving neighbour
    reinforce_target: str = "connections"
    check_invariants: bool = False

    def __post_init__(self):
        self.validate()

    @classmethod
    def midrange(cls, **overrides) -> "NsoConfig":
        """Midpoints of the recommended ranges (geometric midpoint for ``improve_tol``)."""
        base = dict(
            population_size=65,
            learning_rate=0.055,
            distance_decay=1.25,
            perturbation=0.105,
            prune_threshold=0.2,
            reinforcement=0.125,
            max_iters=550,
            improve_tol=10**-4.5,
        )
        base.update(overrides)
        return cls(**base)

    def validate(self):
        if int(self.population_size) != self.population_size or self.population_size < 2:
            raise ConfigError("population_size must be an integer >= 2, got %r" % self.population_size)
        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise ConfigError("max_iters must be a non-negative integer, got %r" % self.max_iters)
        if int(self.stagnation_window) != self.stagnation_window or self.stagnation_window < 1:
            raise ConfigError("stagnation_window must be an integer >= 1")
        for name in ("learning_rate", "distance_decay", "perturbation", "prune_threshold",
                     "reinforcement", "improve_tol"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ConfigError("%s must be finite and > 0, got %r" % (name, v))
        if self.prune_threshold >= 1:
            raise ConfigError("prune_threshold must be < 1, got %r" % self.prune_threshold)
        if self.perturbation_scaling not in ("none", "range"):
            raise ConfigError("perturbation_scaling must be 'none' or 'range', got %r"
                              % self.perturbation_scaling)
        if self.reinforce_target not in ("connections", "best"):
            raise ConfigError("reinforce_target must be 'connections' or 'best', got %r"
                              % self.reinforce_target)
        for name, (lo, hi) in _RECOMMENDED.items():
            v = getattr(self, name)
            if not lo <= v <= hi:
                warnings.warn("%s=%r outside recommended range [%g, %g]" % (name, v, lo, hi),
                              stacklevel=3)

    def replace(self, **changes) -> "NsoConfig":
        return dataclasses.replace(self, **changes)


def load_config(path, **overrides) -> NsoConfig:
    """Read an :class:`NsoConfig` from a ``key = value`` file."""
    values = read_kv_file(path)
    values.update(overrides)
    return build_dataclass(NsoConfig, values, ALIASES)


@dataclass
class Population:
    positions: np.ndarray
    fitness: np.ndarray
    # fitness[i] == f(positions[i]) holds only while this is True
    evaluated: bool = True

    @property
    def size(self) -> int:
        return len(self.positions)

    def copy(self) -> "Population":
        return Population(self.positions.copy(), self.fitness.copy(), self.evaluated)


@dataclass
class NsoState:
    pop: Population
    weights: np.ndarray
    iter: int
    best_point: np.ndarray
    best_value: float
    trace: list = field(default_factory=list)
    rng: Optional[RngStream] = None

    def copy(self) -> "NsoState":
        return NsoState(
            pop=self.pop.copy(),
            weights=self.weights.copy(),
            iter=self.iter,
            best_point=self.best_point.copy(),
            best_value=self.best_value,
            trace=list(self.trace),
            rng=None if self.rng is None else self.rng.clone(),
        )


class InvariantViolation(AssertionError):
    pass


def _seqsum(a: np.ndarray, axis: int) -> np.ndarray:
    # strict left-to-right sum; np.sum's pairwise order depends on size and layout
    return np.add.accumulate(a, axis=axis).take(-1, axis=axis)


# float64 elements per (rows, N, d) temporary; keeps the working set in cache
_BLOCK_ELEMS = 1 << 15


def _row_blocks(n: int, row_elems: int):
    step = max(1, _BLOCK_ELEMS // max(1, row_elems))
    return [slice(i, min(i + step, n)) for i in range(0, n, step)]


def _pairwise_distance(X: np.ndarray) -> np.ndarray:
    """``dist[i, j] = ||X[j] - X[i]||`` with the squares summed left to right."""
    n, d = X.shape
    sq = np.empty((n, n))
    for rows in _row_blocks(n, n * d):
        D = X[np.newaxis, :, :] - X[rows, np.newaxis, :]
        sq[rows] = _seqsum(D * D, axis=2)
    return np.sqrt(sq)


def _pull(weights: np.ndarray, X: np.ndarray, normalize: bool) -> np.ndarray:
    """``sum_j w_ij (X_j - X_i)``, optionally with rows scaled to sum to one."""
    if normalize:
        rows = _seqsum(weights, axis=1)
        safe = np.where(rows > 0, rows, 1.0)
        weights = np.where(rows[:, None] > 0, weights / safe[:, None], 0.0)
    n, d = X.shape
    out = np.empty((n, d))
    for rows in _row_blocks(n, n * d):
        D = X[np.newaxis, :, :] - X[rows, np.newaxis, :]
        out[rows] = _seqsum(weights[rows, :, np.newaxis] * D, axis=1)
    return out


def init_state(cfg: NsoConfig, obj: Objective, counter: EvalCounter) -> NsoState:
    """Random neurons in the box, random off-diagonal synapses in [0, 1)."""
    cfg.validate()
    n, space = cfg.population_size, obj.space
    if not counter.can_afford(n):
        raise BudgetExceeded("budget %s cannot cover the initial population of %d"
                             % (counter.budget, n))
    rng = RngStream(cfg.seed, 0)
    positions = np.stack([uniform_point(space, rng) for _ in range(n)])
    weights = rng.uniform((n, n))
    np.fill_diagonal(weights, 0.0)
    fitness = evaluate_batch(obj, positions, counter)
    i = int(np.argmin(fitness))
    state = NsoState(
        pop=Population(positions, fitness, True),
        weights=weights,
        iter=0,
        best_point=positions[i].copy(),
        best_value=float(fitness[i]),
        trace=[float(fitness[i])],
        rng=rng,
    )
    if cfg.check_invariants:
        check_invariants(state, space)
    return state


def normalized_fitness(fitness) -> np.ndarray:
    """Min-max scale to [0, 1]; a constant vector maps to all 0.5."""
    f = np.asarray(fitness, dtype=float)
    if not np.all(np.isfinite(f)):
        raise NumericError("fitness contains non-finite values")
    lo, hi = f.min(), f.max()
    if hi == lo:
        return np.full(f.shape, 0.5)
    return (f - lo) / (hi - lo)


def hebbian_update(weights, positions, norm_fitness, alpha: float, beta: float) -> np.ndarray:
    """``w_ij += alpha * (1 - |f_i - f_j|) * exp(-beta * ||x_i - x_j||)``, clipped to [0, 1]."""
    X = np.asarray(positions, dtype=float)
    f = np.asarray(norm_fitness, dtype=float)
    dist = _pairwise_distance(X)
    similarity = 1.0 - np.abs(f[:, None] - f[None, :])
    W = np.asarray(weights, dtype=float) + (alpha * similarity) * np.exp(-beta * dist)
    W = np.clip(W, 0.0, 1.0)
    np.fill_diagonal(W, 0.0)
    return W


def move_neurons(positions, weights, noise, space: SearchSpace, literal_pull: bool = False):
    """Pull each neuron toward its weighted neighbours and add ``noise``.

    ``noise`` is the already scaled perturbation, shape ``(N, d)``.
    """
    X = np.asarray(positions, dtype=float)
    moved = X + _pull(weights, X, normalize=not literal_pull) + noise
    return clamp_to_bounds(moved, space)


def perturbation_noise(rng: RngStream, shape, cfg: NsoConfig, space: SearchSpace) -> np.ndarray:
    """``gamma * eps`` with ``eps ~ N(0, 1)``, scaled by box width with ``perturbation_scaling='range'``."""
    noise = cfg.perturbation * rng.normal(shape)
    if cfg.perturbation_scaling == "range":
        noise = noise * space.width
    return noise


def prune(weights, delta: float) -> np.ndarray:
    """Zero every weight strictly below ``delta``."""
    W = np.array(weights, dtype=float)
    W[W < delta] = 0.0
    return W


def reinforce(positions, weights, eta: float, space: SearchSpace, literal_pull: bool = False):
    """Extra step of size ``eta`` along the surviving (pruned) synapses."""
    X = np.asarray(positions, dtype=float)
    pull = _pull(weights, X, normalize=not literal_pull)
    return clamp_to_bounds(X + eta * pull, space)


def reinforce_toward_best(positions, weights, eta: float, space: SearchSpace,
                          anchors, fitness) -> np.ndarray:
    """Step of size ``eta`` toward ``anchors[b]``, b the fittest neighbour with ``w_ib > 0``.

    ``anchors`` and ``fitness`` are the evaluated positions and their values;
    ties go to the lowest index and rows without surviving synapses stay put.
    """
    X = np.asarray(positions, dtype=float)
    alive = np.asarray(weights) > 0
    masked = np.where(alive, np.asarray(fitness, dtype=float)[None, :], np.inf)
    best = np.argmin(masked, axis=1)
    target = np.where(alive.any(axis=1)[:, None], np.asarray(anchors)[best], X)
    return clamp_to_bounds(X + eta * (target - X), space)


def check_convergence(state: NsoState, cfg: NsoConfig):
    """Return ``(stop, reason)`` with reason ``"max_iters"``, ``"stagnation"`` or ``""``."""
    trace = state.trace
    if not trace:
        raise ValueError("empty trace")
    if state.iter >= cfg.max_iters:
        return True, "max_iters"
    w = cfg.stagnation_window
    if len(trace) > w and trace[-1 - w] - trace[-1] < cfg.improve_tol:
        return True, "stagnation"
    return False, ""


def check_invariants(state: NsoState, space: SearchSpace):
    W = state.weights
    if not (np.all(W >= 0.0) and np.all(W <= 1.0)):
        raise InvariantViolation("weights outside [0, 1] at iteration %d" % state.iter)
    if np.any(np.diagonal(W) != 0.0):
        raise InvariantViolation("non-zero self-synapse at iteration %d" % state.iter)
    X = state.pop.positions
    if not (np.all(X >= space.lower) and np.all(X <= space.upper)):
        raise InvariantViolation("neuron outside the box at iteration %d" % state.iter)
    t = np.asarray(state.trace)
    if np.any(np.diff(t) > 0):
        raise InvariantViolation("best-so-far trace increased at iteration %d" % state.iter)


def step(state: NsoState, cfg: NsoConfig, obj: Objective, counter: EvalCounter) -> NsoState:
    """One NSO iteration; returns a new state and leaves ``state`` untouched.

    Raises :class:`BudgetExceeded` before changing anything if the fitness
    refresh cannot be paid for.
    """
    space = obj.space
    s = state.copy()
    pop = s.pop

    if not pop.evaluated:
        pop.fitness = evaluate_batch(obj, pop.positions, counter)
        pop.evaluated = True
        i = int(np.argmin(pop.fitness))
        if pop.fitness[i] < s.best_value:
            s.best_value = float(pop.fitness[i])
            s.best_point = pop.positions[i].copy()

    norm_f = normalized_fitness(pop.fitness)
    W = hebbian_update(s.weights, pop.positions, norm_f, cfg.learning_rate, cfg.distance_decay)
    noise = perturbation_noise(s.rng, pop.positions.shape, cfg, space)
    X = move_neurons(pop.positions, W, noise, space, cfg.literal_pull)
    W = prune(W, cfg.prune_threshold)
    if cfg.reinforce_target == "best":
        X = reinforce_toward_best(X, W, cfg.reinforcement, space, pop.positions, pop.fitness)
    else:
        X = reinforce(X, W, cfg.reinforcement, space, cfg.literal_pull)
    if not np.all(np.isfinite(X)):
        raise NumericError("neuron positions became non-finite")

    pop.positions = X
    pop.evaluated = False
    s.weights = W
    s.trace.append(s.best_value)
    s.iter += 1
    if cfg.check_invariants:
        check_invariants(s, space)
    return s


def run(cfg: NsoConfig, obj: Objective, budget: Optional[int] = None,
        counter: Optional[EvalCounter] = None) -> RunResult:
    """Run NSO until ``max_iters``, stagnation, or the evaluation budget stops it.

    The returned point is the first-found minimizer over every evaluated
    neuron; positions produced by the final move are never evaluated.
    """
    counter = counter if counter is not None else EvalCounter(budget)
    state = init_state(cfg, obj, counter)
    n = cfg.population_size
    while True:
        stop, reason = check_convergence(state, cfg)
        if stop:
            break
        if not state.pop.evaluated and not counter.can_afford(n):
            reason = "budget"
            break
        state = step(state, cfg, obj, counter)
    return RunResult(
        best_point=state.best_point.copy(),
        best_value=state.best_value,
        trace=list(state.trace),
        stop_reason=reason,
        evals_used=counter.used,
    )
