"""Neuron Synapse Optimization with CEC-2014-style benchmarks and a comparison harness."""

from .core import (
    BudgetExceeded,
    ConfigError,
    EvalCounter,
    NsoptError,
    NumericError,
    Objective,
    RngStream,
    RunResult,
    SearchSpace,
)
from .nso import NsoConfig, run as nso_run
from .baselines import GwoConfig, PsoConfig, TlboConfig, gwo_run, pso_run, tlbo_run
from .benchmarks import make_suite, suite_objective
from .harness import ExperimentConfig, run_experiment, summarize, export, load_runs

__version__ = "0.1.0"
