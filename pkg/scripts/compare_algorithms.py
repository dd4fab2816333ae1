"""Run the full comparison grid and print a Mean +- Std table.

    python3 scripts/compare_algorithms.py --dim 30 --runs 20 --out results/compare

Absolute numbers depend on the self-generated shifts and rotations; only the
relative ordering of the algorithms is meaningful.
"""

import argparse
import sys

from nsopt import benchmarks, harness


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dim", type=int, default=30)
    ap.add_argument("--runs", type=int, default=20)
    ap.add_argument("--budget", type=int, default=None, help="default 10000 * dim")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/compare")
    args = ap.parse_args(argv)

    cfg = harness.ExperimentConfig(seed=args.seed, dim=args.dim, runs=args.runs,
                                   budget=args.budget, workers=args.workers, out=args.out)
    records = harness.run_experiment(
        cfg, progress=lambda r: print(".", end="", file=sys.stderr, flush=True))
    print(file=sys.stderr)
    cells = harness.summarize(records)
    harness.export(records, cells, cfg.out)

    table = {(c.function, c.algorithm): c for c in cells}
    labels = {f.id: f.label for f in benchmarks.CATALOGUE}
    print("%-14s" % "function" + "".join("%24s" % a for a in cfg.algos))
    for fid in cfg.funcs:
        row = "%-14s" % ("%s %s" % (labels[fid], fid))[:14]
        for algo in cfg.algos:
            c = table[fid, algo]
            row += "%24s" % ("%.3e +- %.2e" % (c.mean, c.std))
        print(row)


if __name__ == "__main__":
    main()
