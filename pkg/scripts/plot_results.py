"""Convergence curves and final-value boxplots from an export directory.

    python3 scripts/plot_results.py results/compare --out figures

Needs matplotlib (``pip install -e .[plots]``).
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def read_curves(path):
    curves = defaultdict(lambda: defaultdict(list))
    with open(path) as fh:
        for row in csv.DictReader(fh):
            curves[row["function"]][(row["algorithm"], int(row["run"]))].append(
                float(row["best"]))
    return curves


def read_finals(path):
    finals = defaultdict(lambda: defaultdict(list))
    with open(path) as fh:
        for row in csv.DictReader(fh):
            finals[row["function"]][row["algorithm"]].append(float(row["final"]))
    return finals


def mean_curve(traces):
    # runs may stop at different lengths; pad with each run's last value
    n = max(len(t) for t in traces)
    return np.mean([t + [t[-1]] * (n - len(t)) for t in traces], axis=0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("results")
    ap.add_argument("--out", default="figures")
    args = ap.parse_args(argv)
    src, out = Path(args.results), Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for fid, runs in read_curves(src / "curves.csv").items():
        by_algo = defaultdict(list)
        for (algo, _), trace in sorted(runs.items()):
            by_algo[algo].append(trace)
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for algo, traces in by_algo.items():
            ax.semilogy(mean_curve(traces), label=algo)
        ax.set_xlabel("iteration")
        ax.set_ylabel("mean best-so-far")
        ax.set_title(fid)
        ax.legend()
        fig.tight_layout()
        fig.savefig(out / ("curve_%s.png" % fid), dpi=120)
        plt.close(fig)

    for fid, by_algo in read_finals(src / "finals.csv").items():
        fig, ax = plt.subplots(figsize=(5, 3.5))
        algos = sorted(by_algo)
        ax.boxplot([by_algo[a] for a in algos])
        ax.set_xticks(range(1, len(algos) + 1), algos)
        ax.set_yscale("log")
        ax.set_title(fid)
        fig.tight_layout()
        fig.savefig(out / ("box_%s.png" % fid), dpi=120)
        plt.close(fig)
    print("figures written to %s" % out)


if __name__ == "__main__":
    main()
