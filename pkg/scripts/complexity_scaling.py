"""Per-iteration NSO wall time as a function of population size and dimension.

Prints one line per (N, d) with the minimum over repetitions of the mean
iteration time, then the N-doubling and d-doubling ratios.
"""

import argparse
import time
import warnings

import numpy as np

from nsopt import nso
from nsopt.core import EvalCounter, Objective, SearchSpace


def iteration_time(n, d, iters, reps):
    obj = Objective("sphere", SearchSpace.box(d), lambda x: float(x @ x),
                    batch=lambda X: np.einsum("ij,ij->i", X, X))
    cfg = nso.NsoConfig(population_size=n, seed=0)
    best = np.inf
    for _ in range(reps):
        state = nso.init_state(cfg, obj, EvalCounter())
        counter = EvalCounter()
        t0 = time.perf_counter()
        for _ in range(iters):
            state = nso.step(state, cfg, obj, counter)
        best = min(best, (time.perf_counter() - t0) / iters)
    return best


def main(argv=None):
    warnings.simplefilter("ignore")  # N outside the recommended range is intended here
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--iters", type=int, default=200)
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args(argv)

    by_n = {n: iteration_time(n, 10, args.iters, args.reps) for n in (25, 50, 100, 200)}
    by_d = {d: iteration_time(50, d, args.iters, args.reps) for d in (50, 100, 200, 400)}
    for n, t in by_n.items():
        print("N=%4d d=%4d  %8.3f ms/iter" % (n, 10, t * 1e3))
    for d, t in by_d.items():
        print("N=%4d d=%4d  %8.3f ms/iter" % (50, d, t * 1e3))
    print("N 200/100 ratio %.2f (quadratic: 4)" % (by_n[200] / by_n[100]))
    print("d 400/200 ratio %.2f (linear: 2)" % (by_d[400] / by_d[200]))


if __name__ == "__main__":
    main()
