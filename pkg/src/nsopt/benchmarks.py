"""Rotated/shifted test landscapes modelled on CEC 2014 F10-F19.

The official shift vectors and rotation matrices are not redistributed, so
every transform here is generated from a seed. Values are therefore
self-consistent but not comparable in absolute terms to published tables.

All base functions accept a single vector ``z`` of shape ``(d,)`` or a batch
of shape ``(n, d)`` and reduce over the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import ConfigError, Objective, RngStream, SearchSpace

__all__ = [
    "FunctionInfo",
    "CATALOGUE",
    "BASE_IDS",
    "COMPOSITION_IDS",
    "Transform",
    "CompositionSpec",
    "make_rotation",
    "make_transform",
    "apply_transform",
    "evaluate_base",
    "schwefel_classic",
    "evaluate_composition",
    "default_composition",
    "make_objective",
    "make_suite",
    "suite_objective",
    "resolve_id",
    "function_ids",
]


class FunctionInfo(NamedTuple):
    id: str
    label: str
    name: str
    type: str


CATALOGUE = (
    FunctionInfo("bent_cigar", "F10", "Rotated Bent Cigar Function", "Unimodal"),
    FunctionInfo("discus", "F11", "Rotated Discus Function", "Unimodal"),
    FunctionInfo("ackley", "F12", "Rotated Ackley's Function", "Multimodal"),
    FunctionInfo("weierstrass", "F13", "Rotated Weierstrass Function", "Multimodal"),
    FunctionInfo("griewank", "F14", "Rotated Griewank's Function", "Multimodal"),
    FunctionInfo("rastrigin", "F15", "Rotated Rastrigin's Function", "Multimodal"),
    FunctionInfo("schwefel", "F16", "Rotated schwefel's Function", "Multimodal"),
    FunctionInfo("katsuura", "F17", "Rotated Katsuura Function", "Multimodal"),
    FunctionInfo("composition1", "F18", "Composition Function 1", "Composition"),
    FunctionInfo("composition2", "F19", "Composition Function 2", "Composition"),
)
COMPOSITION_IDS = ("composition1", "composition2")
BASE_IDS = tuple(f.id for f in CATALOGUE if f.id not in COMPOSITION_IDS)
_BY_LABEL = {f.label.lower(): f.id for f in CATALOGUE}

BOX = (-100.0, 100.0)
# shifts are drawn from the inner 80% of the box
SHIFT_FRACTION = 0.8
SCHWEFEL_OPT = 420.9687
SCHWEFEL_CONST = 418.9829


def function_ids() -> list:
    return [f.id for f in CATALOGUE]


def resolve_id(name: str) -> str:
    """Accept either an id (``"rastrigin"``) or a Table label (``"F15"``)."""
    key = name.strip()
    if key in BASE_IDS or key in COMPOSITION_IDS:
        return key
    if key.lower() in _BY_LABEL:
        return _BY_LABEL[key.lower()]
    raise ConfigError("unknown function %r (known: %s)" % (name, ", ".join(function_ids())))


def _sub_seed(seed: int, *keys: int) -> int:
    seq = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *keys])
    return int(seq.generate_state(1, np.uint64)[0])


def make_rotation(d: int, seed: int) -> np.ndarray:
    """Haar-random orthogonal matrix: QR of a Gaussian matrix with the sign of R's diagonal fixed."""
    if d < 1:
        raise ConfigError("d must be >= 1")
    A = RngStream(seed, 1).normal((d, d))
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


@dataclass(frozen=True)
class Transform:
    shift: np.ndarray
    rotation: np.ndarray
    seed: int = 0

    @property
    def dim(self) -> int:
        return len(self.shift)

    @classmethod
    def identity(cls, d: int) -> "Transform":
        return cls(np.zeros(d), np.eye(d), 0)


def make_transform(d: int, seed: int, box=BOX) -> Transform:
    lo, hi = box
    c, half = (lo + hi) / 2, (hi - lo) / 2 * SHIFT_FRACTION
    shift = c + half * (2.0 * RngStream(seed, 2).uniform(d) - 1.0)
    return Transform(shift, make_rotation(d, seed), seed)


def apply_transform(x, t: Transform) -> np.ndarray:
    """``z = M (x - o)`` for a vector or for each row of a batch."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != t.dim:
        raise ValueError("dimension mismatch: x has %d coordinates, transform %d"
                         % (x.shape[-1], t.dim))
    diff = x - t.shift
    # elementwise product + last-axis sum keeps each row's value independent of batch size
    return (diff[..., np.newaxis, :] * t.rotation).sum(axis=-1)


def _bent_cigar(z):
    return z[..., 0] ** 2 + 1e6 * (z[..., 1:] ** 2).sum(axis=-1)


def _discus(z):
    return 1e6 * z[..., 0] ** 2 + (z[..., 1:] ** 2).sum(axis=-1)


def _ackley(z):
    d = z.shape[-1]
    s1 = (z**2).sum(axis=-1) / d
    s2 = np.cos(2.0 * np.pi * z).sum(axis=-1) / d
    return -20.0 * np.exp(-0.2 * np.sqrt(s1)) - np.exp(s2) + 20.0 + np.e


_WA, _WB, _WK = 0.5, 3.0, 20
_AK = _WA ** np.arange(_WK + 1)
_BK = _WB ** np.arange(_WK + 1)
_WEIER_OFFSET = float((_AK * np.cos(2.0 * np.pi * _BK * 0.5)).sum())


def _weierstrass(z):
    d = z.shape[-1]
    terms = _AK * np.cos(2.0 * np.pi * _BK * (z[..., np.newaxis] + 0.5))
    return terms.sum(axis=(-1, -2)) - d * _WEIER_OFFSET


def _griewank(z):
    i = np.arange(1, z.shape[-1] + 1)
    return (z**2).sum(axis=-1) / 4000.0 - np.cos(z / np.sqrt(i)).prod(axis=-1) + 1.0


def _rastrigin(z):
    d = z.shape[-1]
    return (z**2 - 10.0 * np.cos(2.0 * np.pi * z)).sum(axis=-1) + 10.0 * d


def schwefel_classic(u):
    """``418.9829 d - sum u_i sin(sqrt|u_i|)``; minimum ~0 at ``u_i = 420.9687``."""
    u = np.asarray(u, dtype=float)
    d = u.shape[-1]
    return SCHWEFEL_CONST * d - (u * np.sin(np.sqrt(np.abs(u)))).sum(axis=-1)


def _schwefel(z):
    # z = 0 lands on the classic optimum; [-100, 100] spans [-500, 500] before clipping
    u = np.clip(SCHWEFEL_OPT + 5.0 * z, -500.0, 500.0)
    return schwefel_classic(u)


_K = np.arange(1, 33)
_TWO_K = 2.0**_K


def _katsuura(z):
    d = z.shape[-1]
    scaled = z[..., np.newaxis] * _TWO_K
    inner = (np.abs(scaled - np.round(scaled)) / _TWO_K).sum(axis=-1)
    i = np.arange(1, d + 1)
    prod = ((1.0 + i * inner) ** (10.0 / d**1.2)).prod(axis=-1)
    return 10.0 / d**2 * prod - 10.0 / d**2


_BASE = {
    "bent_cigar": _bent_cigar,
    "discus": _discus,
    "ackley": _ackley,
    "weierstrass": _weierstrass,
    "griewank": _griewank,
    "rastrigin": _rastrigin,
    "schwefel": _schwefel,
    "katsuura": _katsuura,
}


def evaluate_base(fid: str, z):
    """Untransformed base function ``fid`` at ``z`` (vector or batch)."""
    if fid in COMPOSITION_IDS:
        raise ConfigError("%s is a composition; use evaluate_composition" % fid)
    try:
        fn = _BASE[fid]
    except KeyError:
        raise ConfigError("unknown base function %r" % fid) from None
    z = np.asarray(z, dtype=float)
    out = fn(z)
    return float(out) if z.ndim == 1 else out


@dataclass(frozen=True)
class CompositionSpec:
    components: Sequence  # of (base id, Transform)
    sigmas: Sequence[float]
    lambdas: Sequence[float]
    biases: Sequence[float]

    def __post_init__(self):
        n = len(self.components)
        if n == 0:
            raise ConfigError("composition needs at least one component")
        if not (len(self.sigmas) == len(self.lambdas) == len(self.biases) == n):
            raise ConfigError("components, sigmas, lambdas and biases must have equal length")
        if any(s <= 0 for s in self.sigmas):
            raise ConfigError("sigmas must be > 0")
        for fid, _ in self.components:
            if fid not in BASE_IDS:
                raise ConfigError("composition component must be a base function, got %r" % fid)


def composition_weights(spec: CompositionSpec, x) -> np.ndarray:
    """Normalized component weights, shape ``(..., n_components)``.

    A point sitting exactly on a component's shift gets all the weight; if
    every raw weight underflows the weights are uniform.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    sig = np.asarray(spec.sigmas, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        dist2 = np.stack(
            [((x - t.shift) ** 2).sum(axis=-1) for _, t in spec.components], axis=-1
        )
        raw = np.exp(-dist2 / (2.0 * d * sig**2)) / np.sqrt(dist2)
    hit = dist2 == 0.0
    if np.any(hit):
        first = np.argmax(hit, axis=-1)
        onehot = np.eye(len(sig))[first]
        raw = np.where(hit.any(axis=-1, keepdims=True), onehot, raw)
    total = raw.sum(axis=-1, keepdims=True)
    uniform = np.full_like(raw, 1.0 / len(sig))
    with np.errstate(invalid="ignore", divide="ignore"):
        w = raw / total
    return np.where(total > 0, w, uniform)


def evaluate_composition(spec: CompositionSpec, x):
    x = np.asarray(x, dtype=float)
    w = composition_weights(spec, x)
    parts = np.stack(
        [
            lam * np.asarray(evaluate_base(fid, apply_transform(x, t))) + bias
            for (fid, t), lam, bias in zip(spec.components, spec.lambdas, spec.biases)
        ],
        axis=-1,
    )
    out = (w * parts).sum(axis=-1)
    return float(out) if x.ndim == 1 else out


_COMPOSITIONS = {
    "composition1": (("rastrigin", "griewank", "ackley"), (10.0, 20.0, 30.0),
                     (1.0, 5.0, 1e-1), (0.0, 100.0, 200.0)),
    "composition2": (("schwefel", "rastrigin", "bent_cigar"), (10.0, 20.0, 30.0),
                     (0.25, 1.0, 1e-6), (0.0, 100.0, 200.0)),
}


def default_composition(fid: str, dim: int, seed: int) -> CompositionSpec:
    ids, sigmas, lambdas, biases = _COMPOSITIONS[fid]
    comps = [(cid, make_transform(dim, _sub_seed(seed, k))) for k, cid in enumerate(ids)]
    return CompositionSpec(comps, sigmas, lambdas, biases)


def make_objective(fid: str, dim: int, seed: int) -> Objective:
    """One suite member with its transform(s) derived from ``seed``."""
    fid = resolve_id(fid)
    info = next(f for f in CATALOGUE if f.id == fid)
    space = SearchSpace.box(dim, *BOX)
    if fid in COMPOSITION_IDS:
        spec = default_composition(fid, dim, seed)

        def batch(X):
            return evaluate_composition(spec, np.atleast_2d(X))

        known = float(spec.biases[0])
    else:
        t = make_transform(dim, seed)
        fn = _BASE[fid]

        def batch(X):
            return fn(apply_transform(np.atleast_2d(X), t))

        known = 0.0

    def func(x):
        return float(batch(np.asarray(x, dtype=float)[np.newaxis, :])[0])

    return Objective(id=fid, space=space, func=func, batch=batch, known_optimum=known,
                     name=info.name, params=spec if fid in COMPOSITION_IDS else t)


def suite_objective(fid: str, dim: int, seed: int) -> Objective:
    """The member ``fid`` of ``make_suite(dim, seed)``, built on its own."""
    fid = resolve_id(fid)
    k = function_ids().index(fid)
    return make_objective(fid, dim, _sub_seed(seed, 100 + k))


def make_suite(dim: int, seed: int) -> list:
    """The ten F10-F19 analogues in table order."""
    if dim < 2:
        raise ConfigError("suite dimension must be >= 2, got %s" % dim)
    return [suite_objective(f.id, dim, seed) for f in CATALOGUE]
