"""Experiment grids over (algorithm x function x run), aggregation and export.

Every run gets its own seed, a hash of ``(suite seed, algorithm, function,
run index)``, so a record never depends on which other cells were run or in
which order. Outputs are plain CSV/JSON with floats written as the shortest
decimal that round-trips, which makes byte comparison a valid determinism
check.
"""

from __future__ import annotations

import csv
import dataclasses
import functools
import hashlib
import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import baselines, benchmarks, nso
from .core import ConfigError, NsoptError, Objective, RunResult
from .kvconfig import build_dataclass, coerce, read_kv_file

__all__ = [
    "AlgorithmSpec",
    "ALGORITHMS",
    "register_algorithm",
    "ExperimentConfig",
    "RunRecord",
    "SummaryCell",
    "derive_seed",
    "run_experiment",
    "summarize",
    "export",
    "load_runs",
    "write_summary_csv",
]


@dataclass(frozen=True)
class AlgorithmSpec:
    """Registry entry: ``run(params, objective, seed, budget) -> RunResult``.

    ``params`` maps config keys to raw string (or typed) values.
    """

    id: str
    config_cls: type
    run: Callable[[dict, Objective, int, Optional[int]], RunResult]
    aliases: dict = field(default_factory=dict)
    description: str = ""

    def make_config(self, params: dict):
        return build_dataclass(self.config_cls, params, self.aliases)

    def population_size(self, params: dict) -> int:
        return self.make_config(params).population_size


def _run_nso(params, obj, seed, budget):
    values = dict(params)
    values["seed"] = seed
    cfg = build_dataclass(nso.NsoConfig, values, nso.ALIASES)
    explicit = any(nso.ALIASES.get(k, k) == "max_iters" for k in params)
    if budget is not None and not explicit:
        # the budget decides the iteration count; N evals per refreshed iteration
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg = cfg.replace(max_iters=budget // cfg.population_size)
    return nso.run(cfg, obj, budget=budget)


def _baseline_runner(fn, cls):
    def runner(params, obj, seed, budget):
        return fn(build_dataclass(cls, params), obj, seed, budget)

    return runner


ALGORITHMS = {}


def register_algorithm(spec: AlgorithmSpec):
    """Add an optimizer to the registry (e.g. a third-party HOA implementation)."""
    if spec.id in ALGORITHMS:
        raise ConfigError("algorithm %r already registered" % spec.id)
    ALGORITHMS[spec.id] = spec


register_algorithm(AlgorithmSpec("nso", nso.NsoConfig, _run_nso, nso.ALIASES,
                                 "Neuron Synapse Optimization"))
register_algorithm(AlgorithmSpec("pso", baselines.PsoConfig,
                                 _baseline_runner(baselines.pso_run, baselines.PsoConfig),
                                 description="global-best particle swarm"))
register_algorithm(AlgorithmSpec("gwo", baselines.GwoConfig,
                                 _baseline_runner(baselines.gwo_run, baselines.GwoConfig),
                                 description="grey wolf optimizer"))
register_algorithm(AlgorithmSpec("tlbo", baselines.TlboConfig,
                                 _baseline_runner(baselines.tlbo_run, baselines.TlboConfig),
                                 description="teaching-learning-based optimization"))


def _split_list(value) -> tuple:
    if isinstance(value, str):
        return tuple(s.strip() for s in value.split(",") if s.strip())
    return tuple(value)


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    dim: int = 30
    runs: int = 20
    # None means 10000 * dim
    budget: Optional[int] = None
    out: str = "results"
    algos: tuple = ("nso", "pso", "gwo", "tlbo")
    funcs: tuple = tuple(benchmarks.function_ids())
    # per-algorithm raw parameters, {"nso": {"alpha": "0.05"}}
    params: dict = field(default_factory=dict)
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "algos", _split_list(self.algos))
        object.__setattr__(self, "funcs",
                           tuple(benchmarks.resolve_id(f) for f in _split_list(self.funcs)))
        self.validate()

    @property
    def eval_budget(self) -> int:
        return self.budget if self.budget is not None else 10000 * self.dim

    def validate(self):
        if self.runs < 1:
            raise ConfigError("runs must be >= 1, got %s" % self.runs)
        if self.dim < 2:
            raise ConfigError("dim must be >= 2, got %s" % self.dim)
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not self.algos:
            raise ConfigError("no algorithms selected")
        if not self.funcs:
            raise ConfigError("no functions selected")
        if len(set(self.algos)) != len(self.algos) or len(set(self.funcs)) != len(self.funcs):
            raise ConfigError("duplicate algorithm or function id")
        for a in self.algos:
            if a not in ALGORITHMS:
                raise ConfigError("unknown algorithm %r (known: %s)"
                                  % (a, ", ".join(sorted(ALGORITHMS))))
        for a in self.params:
            if a not in ALGORITHMS:
                raise ConfigError("parameters given for unknown algorithm %r" % a)
        for a in self.algos:
            n = ALGORITHMS[a].population_size(self.params.get(a, {}))
            if self.eval_budget < n:
                raise ConfigError("budget %d is smaller than the %s population (%d)"
                                  % (self.eval_budget, a, n))

    @classmethod
    def from_mapping(cls, values: dict, base: "ExperimentConfig" = None) -> "ExperimentConfig":
        """Build from ``key = value`` pairs; ``algo.key`` entries become algorithm params."""
        plain, params = {}, {}
        for key, value in values.items():
            if "." in key:
                algo, sub = key.split(".", 1)
                params.setdefault(algo.strip(), {})[sub.strip()] = value
            else:
                plain[key] = value
        hints = {"seed": int, "dim": int, "runs": int, "budget": int, "out": str,
                 "workers": int, "timing": bool}
        kwargs = {}
        for key, value in plain.items():
            if key in ("algos", "funcs"):
                kwargs[key] = _split_list(value)
            elif key in hints:
                try:
                    kwargs[key] = coerce(value, hints[key])
                except ValueError as exc:
                    raise ConfigError("bad value for %r: %s" % (key, exc)) from None
            else:
                raise ConfigError("unknown experiment key %r" % key)
        if base is not None:
            merged = {a: dict(p) for a, p in base.params.items()}
            for a, p in params.items():
                merged.setdefault(a, {}).update(p)
            return dataclasses.replace(base, params=merged, **kwargs)
        return cls(params=params, **kwargs)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        return cls.from_mapping(read_kv_file(path))


@dataclass
class RunRecord:
    algorithm: str
    function: str
    run: int
    seed: int
    final_best: float
    trace: list
    evals_used: int
    wall_ms: Optional[float] = None


@dataclass(frozen=True)
class SummaryCell:
    algorithm: str
    function: str
    mean: float
    std: float


def derive_seed(suite_seed: int, algorithm: str, function: str, run: int) -> int:
    """Stable 64-bit run seed (BLAKE2b of the cell key)."""
    key = "%d|%s|%s|%d" % (suite_seed, algorithm, function, run)
    return int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "little")


@functools.lru_cache(maxsize=64)
def _objective(fid, dim, suite_seed):
    return benchmarks.suite_objective(fid, dim, suite_seed)


def _execute(task) -> RunRecord:
    algo, params, fid, dim, suite_seed, run, seed, budget, timing = task
    obj = _objective(fid, dim, suite_seed)
    t0 = time.perf_counter()
    result = ALGORITHMS[algo].run(params, obj, seed, budget)
    wall = (time.perf_counter() - t0) * 1000.0 if timing else None
    return RunRecord(algo, fid, run, seed, float(result.best_value),
                     [float(v) for v in result.trace], int(result.evals_used), wall)


def _sort_key(r: RunRecord):
    return (r.function, r.algorithm, r.run)


def run_experiment(cfg: ExperimentConfig, progress: Callable[[RunRecord], None] = None) -> list:
    """Run every (algorithm, function, run) cell; records come back sorted."""
    cfg.validate()
    budget = cfg.eval_budget
    tasks = [
        (a, dict(cfg.params.get(a, {})), f, cfg.dim, cfg.seed, r,
         derive_seed(cfg.seed, a, f, r), budget, cfg.timing)
        for f in cfg.funcs
        for a in cfg.algos
        for r in range(cfg.runs)
    ]
    records = []
    if cfg.workers == 1:
        for t in tasks:
            records.append(_execute(t))
            if progress:
                progress(records[-1])
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for rec in pool.map(_execute, tasks):
                records.append(rec)
                if progress:
                    progress(rec)
    return sorted(records, key=_sort_key)


def summarize(records) -> list:
    """Mean and sample standard deviation (n - 1) of final values per cell."""
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    cells = {}
    for r in records:
        cells.setdefault((r.function, r.algorithm), []).append(float(r.final_best))
    out = []
    for (fid, algo), finals in sorted(cells.items()):
        n = len(finals)
        mean = math.fsum(finals) / n
        # exact-sum rounding can land one ulp outside [min, max]
        mean = min(max(mean, min(finals)), max(finals))
        std = math.sqrt(math.fsum((x - mean) ** 2 for x in finals) / (n - 1)) if n > 1 else 0.0
        out.append(SummaryCell(algo, fid, mean, std))
    return out


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_summary_csv(path, summaries):
    cells = sorted(summaries, key=lambda c: (c.function, c.algorithm))
    _write_csv(Path(path), ("algorithm", "function", "mean", "std"),
               ((c.algorithm, c.function, c.mean, c.std) for c in cells))


def export(records, summaries, out_dir) -> dict:
    """Write summary.csv, runs.json, curves.csv and finals.csv into ``out_dir``."""
    records = sorted(records, key=_sort_key)
    if not records:
        raise ValueError("no records to export")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise NsoptError("cannot create output directory %s: %s" % (out, exc)) from exc
    paths = {name: out / name for name in ("summary.csv", "runs.json", "curves.csv", "finals.csv")}
    write_summary_csv(paths["summary.csv"], summaries)
    with paths["runs.json"].open("w") as fh:
        json.dump([dataclasses.asdict(r) for r in records], fh, indent=1, allow_nan=False)
        fh.write("\n")
    _write_csv(paths["curves.csv"], ("algorithm", "function", "run", "iteration", "best"),
               ((r.algorithm, r.function, r.run, t, v)
                for r in records for t, v in enumerate(r.trace)))
    _write_csv(paths["finals.csv"], ("algorithm", "function", "run", "final"),
               ((r.algorithm, r.function, r.run, r.final_best) for r in records))
    return paths


def load_runs(path) -> list:
    """Read RunRecords back from a runs.json file."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise NsoptError("cannot read %s: %s" % (path, exc.strerror or exc)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("%s is not valid JSON: %s" % (path, exc)) from exc
    names = [f.name for f in dataclasses.fields(RunRecord)]
    records = []
    for i, item in enumerate(raw):
        missing = [n for n in names[:-1] if n not in item]
        if missing:
            raise ConfigError("record %d in %s lacks %s" % (i, path, ", ".join(missing)))
        records.append(RunRecord(**{n: item.get(n) for n in names}))
    return records
