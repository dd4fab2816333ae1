"""Objective abstraction, search-space geometry, budget accounting and RNG.

Everything in here is shared by NSO, the baselines and the harness. All
optimizers minimize; maximize ``g`` by wrapping ``-g`` with :func:`negated`.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

__all__ = [
    "NsoptError",
    "ConfigError",
    "BudgetExceeded",
    "NumericError",
    "SearchSpace",
    "Objective",
    "EvalCounter",
    "RngStream",
    "RunResult",
    "uniform_point",
    "clamp_to_bounds",
    "evaluate",
    "evaluate_batch",
    "negated",
]


class NsoptError(Exception):
    """Base class for library errors."""


class ConfigError(NsoptError, ValueError):
    """Invalid configuration or unknown identifier."""


class BudgetExceeded(NsoptError):
    """The evaluation budget of a run is exhausted."""


class NumericError(NsoptError, ArithmeticError):
    """An objective or an intermediate quantity is not finite."""


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned box ``[lower, upper]`` in ``dim`` dimensions."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ConfigError("lower and upper must be 1-D vectors of equal length")
        if lower.size < 1:
            raise ConfigError("dim must be >= 1")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigError("bounds must be finite")
        if np.any(lower > upper):
            raise ConfigError("lower must be <= upper in every dimension")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, dim: int, low: float = -100.0, high: float = 100.0) -> "SearchSpace":
        if dim < 1:
            raise ConfigError("dim must be >= 1, got %s" % dim)
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass(frozen=True)
class Objective:
    """A deterministic function to minimize over a box.

    ``func`` maps one d-vector to a float. ``batch``, when given, maps an
    ``(n, d)`` array to ``n`` values and must agree with ``func`` row by row;
    it only exists for speed.
    """

    id: str
    space: SearchSpace
    func: Callable[[np.ndarray], float]
    batch: Optional[Callable[[np.ndarray], np.ndarray]] = None
    known_optimum: Optional[float] = None
    name: str = ""
    # construction data (transforms, composition spec); never read by optimizers
    params: Any = field(default=None, compare=False, repr=False)

    def __call__(self, x) -> float:
        return float(self.func(np.asarray(x, dtype=float)))

    def many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.batch is not None:
            return np.asarray(self.batch(X), dtype=float).reshape(len(X))
        return np.array([float(self.func(x)) for x in X])


def negated(obj: Objective) -> Objective:
    """Turn a maximization problem into minimization of ``-f``."""
    func = obj.func
    batch = obj.batch
    return Objective(
        id=obj.id + "_neg",
        space=obj.space,
        func=lambda x: -func(x),
        batch=None if batch is None else (lambda X: -np.asarray(batch(X))),
        known_optimum=None if obj.known_optimum is None else -obj.known_optimum,
        name=obj.name,
    )


@dataclass
class EvalCounter:
    """Counts objective calls of one run; optionally enforces a budget."""

    budget: Optional[int] = None
    used: int = 0

    def __post_init__(self):
        if self.budget is not None and self.budget < 1:
            raise ConfigError("budget must be a positive integer, got %s" % self.budget)

    @property
    def remaining(self) -> Optional[int]:
        return None if self.budget is None else self.budget - self.used

    def can_afford(self, n: int) -> bool:
        return self.budget is None or self.used + n <= self.budget

    def charge(self, n: int = 1):
        if not self.can_afford(n):
            raise BudgetExceeded(
                "evaluation budget %d exhausted (%d used, %d requested)"
                % (self.budget, self.used, n)
            )
        self.used += n


class RngStream:
    """Reproducible random stream keyed by ``(root_seed, stream_id)``.

    Backed by numpy's PCG64 seeded through ``SeedSequence(root_seed,
    spawn_key=(stream_id,))``; distinct stream ids give independent streams.
    """

    def __init__(self, root_seed: int, stream_id: int = 0):
        if stream_id < 0:
            raise ConfigError("stream_id must be non-negative")
        self.root_seed = int(root_seed) & 0xFFFFFFFFFFFFFFFF
        self.stream_id = int(stream_id)
        seq = np.random.SeedSequence(self.root_seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def uniform(self, size=None) -> np.ndarray:
        return self._gen.random(size)

    def normal(self, size=None) -> np.ndarray:
        return self._gen.standard_normal(size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def clone(self) -> "RngStream":
        """Fork a copy that replays exactly the values this stream will draw."""
        return copy.deepcopy(self)

    def __eq__(self, other):
        if not isinstance(other, RngStream):
            return NotImplemented
        return (
            self.root_seed == other.root_seed
            and self.stream_id == other.stream_id
            and self._gen.bit_generator.state == other._gen.bit_generator.state
        )

    def __repr__(self):
        return "RngStream(root_seed=%d, stream_id=%d)" % (self.root_seed, self.stream_id)


@dataclass
class RunResult:
    """Outcome of one optimizer run. ``trace[t]`` is best-so-far after iteration t."""

    best_point: np.ndarray
    best_value: float
    trace: list = field(default_factory=list)
    stop_reason: str = ""
    evals_used: int = 0


def uniform_point(space: SearchSpace, rng: RngStream, r=None) -> np.ndarray:
    """Sample ``lower + r * (upper - lower)`` with ``r ~ U(0, 1)^d``.

    ``r`` may be injected (values in [0, 1]) instead of drawn from ``rng``.
    """
    if r is None:
        r = rng.uniform(space.dim)
    x = space.lower + np.asarray(r, dtype=float) * space.width
    # rounding can overshoot upper by one ulp
    return np.minimum(x, space.upper)


def clamp_to_bounds(x, space: SearchSpace) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != space.dim:
        raise ValueError("expected vectors of length %d, got shape %s" % (space.dim, x.shape))
    return np.clip(x, space.lower, space.upper)


def evaluate(obj: Objective, x, counter: EvalCounter) -> float:
    """Evaluate ``obj`` at ``x``, charging one call to ``counter``."""
    counter.charge(1)
    value = obj(x)
    if not np.isfinite(value):
        raise NumericError("objective %r returned %r" % (obj.id, value))
    return value


def evaluate_batch(obj: Objective, X, counter: EvalCounter) -> np.ndarray:
    """Evaluate every row of ``X``; charges ``len(X)`` calls up front."""
    X = np.asarray(X, dtype=float)
    counter.charge(len(X))
    values = obj.many(X)
    if not np.all(np.isfinite(values)):
        raise NumericError("objective %r returned a non-finite value" % obj.id)
    return values
