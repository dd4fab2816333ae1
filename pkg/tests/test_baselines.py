import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsopt import baselines as bl
from nsopt.baselines import GwoConfig, PsoConfig, TlboConfig
from nsopt.core import ConfigError, Objective, RngStream, SearchSpace

RUNNERS = [
    (bl.pso_run, PsoConfig()),
    (bl.gwo_run, GwoConfig()),
    (bl.tlbo_run, TlboConfig()),
]
IDS = ["pso", "gwo", "tlbo"]


def quad(dim, low=-5.0, high=5.0):
    return Objective("quad", SearchSpace.box(dim, low, high), lambda x: float(np.dot(x, x)),
                     batch=lambda X: np.einsum("ij,ij->i", X, X))


def test_config_validation():
    with pytest.raises(ConfigError):
        PsoConfig(swarm_size=1)
    with pytest.raises(ConfigError):
        PsoConfig(velocity_clamp=0.0)
    with pytest.raises(ConfigError):
        PsoConfig(velocity_clamp=1.5)
    with pytest.raises(ConfigError):
        GwoConfig(pack_size=0)
    with pytest.raises(ConfigError):
        TlboConfig(class_size=1)
    with pytest.raises(ConfigError):
        bl.pso_run(PsoConfig(), quad(2), seed=0)  # no budget, no max_iters


def test_pso_frozen_swarm():
    cfg = PsoConfig(inertia=0.0, c1=0.0, c2=0.0, max_iters=30)
    r = bl.pso_run(cfg, quad(3), seed=4)
    assert len(set(r.trace)) == 1 and len(r.trace) == 31


@pytest.mark.parametrize("run, cfg", RUNNERS, ids=IDS)
def test_deterministic(run, cfg):
    a = run(cfg, quad(4), seed=9, budget=3000)
    b = run(cfg, quad(4), seed=9, budget=3000)
    assert a.trace == b.trace and np.array_equal(a.best_point, b.best_point)
    c = run(cfg, quad(4), seed=10, budget=3000)
    assert c.trace != a.trace


@settings(max_examples=15, deadline=None)
@given(idx=st.integers(0, 2), budget=st.integers(60, 2500), seed=st.integers(0, 10**9))
def test_budget_and_trace(idx, budget, seed):
    run, cfg = RUNNERS[idx]
    obj = quad(3)
    r = run(cfg, obj, seed=seed, budget=budget)
    assert r.evals_used <= budget
    assert all(b <= a for a, b in zip(r.trace, r.trace[1:]))
    assert r.best_value == r.trace[-1] == obj.many(r.best_point[None])[0]
    assert obj.space.contains(r.best_point)
    assert r.stop_reason == "budget"


@pytest.mark.parametrize("run, cfg", RUNNERS, ids=IDS)
def test_max_iters_stop(run, cfg):
    r = run(cfg.__class__(max_iters=5), quad(2), seed=0, budget=10**6)
    assert r.stop_reason == "max_iters" and len(r.trace) == 6


@pytest.mark.parametrize("run, cfg", RUNNERS, ids=IDS)
def test_10d_quadratic(run, cfg):
    hits = sum(run(cfg, quad(10), seed=s, budget=10**4).best_value <= 1e-3 for s in range(20))
    assert hits >= 18


@pytest.mark.parametrize("run, cfg", RUNNERS, ids=IDS)
def test_2d_quadratic_median(run, cfg):
    finals = [run(cfg, quad(2), seed=s, budget=5000).best_value for s in range(20)]
    assert np.median(finals) <= 1e-2


def test_gwo_schedule():
    assert bl.gwo_a_schedule(0, 100) == 2.0
    assert bl.gwo_a_schedule(100, 100) == 0.0
    assert bl.gwo_a_schedule(50, 100) == 1.0
    a = [bl.gwo_a_schedule(t, 40) for t in range(41)]
    assert np.allclose(np.diff(a), -0.05, rtol=0, atol=1e-15)


def test_gwo_collapsed_pack():
    p = np.array([1.5, -0.25, 3.0])
    X = np.tile(p, (6, 1))
    leaders = np.tile(p, (3, 1))
    moved = bl._gwo_move(X, leaders, 0.0, RngStream(1))
    assert np.array_equal(moved, X)


def test_teaching_factor_distribution():
    tf = bl.teaching_factor(RngStream(5), 10**4)
    assert set(np.unique(tf)) <= {1, 2}
    # binomial std for p=0.5, n=1e4 is 0.005
    assert abs(np.mean(tf == 2) - 0.5) < 0.02


def test_teacher_step_identical_class():
    X = np.tile([2.0, -1.0, 0.5], (5, 1))
    r = RngStream(0).uniform((5, 3))
    out = bl.teacher_step(X, np.zeros(5), np.ones((5, 1)), r)
    assert np.array_equal(out, X)


def test_greedy_never_worsens():
    rng = np.random.default_rng(0)
    X, cand = rng.normal(size=(20, 3)), rng.normal(size=(20, 3))
    f, cf = rng.normal(size=20), rng.normal(size=20)
    Xn, fn = bl._greedy(X, f, cand, cf)
    assert np.all(fn <= f)
    assert np.all(fn == np.minimum(f, cf))


def test_tlbo_students_never_worsen():
    # with budget for one iteration the returned best is no worse than the initial one
    obj = quad(5)
    r = bl.tlbo_run(TlboConfig(), obj, seed=3, budget=30 + 60)
    assert len(r.trace) == 2 and r.trace[1] <= r.trace[0]
