"""Compare the two reinforcement targets on the unrotated sphere.

``connections`` (default) pulls along the surviving weighted connections;
``best`` pulls toward the fittest surviving neighbour's evaluated position.
"""

import argparse
import warnings

import numpy as np

from nsopt import nso
from nsopt.core import Objective, SearchSpace


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=10)
    ap.add_argument("--budget", type=int, default=30000)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--no-stagnation", action="store_true",
                    help="disable the stagnation stop")
    args = ap.parse_args(argv)

    obj = Objective("sphere", SearchSpace.box(args.dim, -5.0, 5.0), lambda x: float(x @ x),
                    batch=lambda X: np.einsum("ij,ij->i", X, X))
    extra = {"stagnation_window": 10**9} if args.no_stagnation else {}
    for target in ("connections", "best"):
        finals, iters = [], []
        for seed in range(args.seeds):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                cfg = nso.NsoConfig.midrange(seed=seed, reinforce_target=target, **extra)
            r = nso.run(cfg, obj, budget=args.budget)
            finals.append(r.best_value)
            iters.append(len(r.trace) - 1)
        finals = np.array(finals)
        print("%-12s median %.3e  <=0.1: %2d/%d  median iters %d"
              % (target, np.median(finals), np.sum(finals <= 0.1), args.seeds,
                 int(np.median(iters))))


if __name__ == "__main__":
    main()
