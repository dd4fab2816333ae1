"""Command line entry point: ``nsopt run|list-functions|list-algorithms|summarize``.

Exit status: 0 on success, 2 for configuration/usage errors, 3 for runtime
errors.
"""

from __future__ import annotations

import argparse
import sys

from . import benchmarks, harness
from .core import ConfigError, NsoptError

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--seed", type=int, default=S, help="suite/experiment seed")
    p.add_argument("--dim", type=int, default=S, help="problem dimension")
    p.add_argument("--runs", type=int, default=S, help="independent runs per cell")
    p.add_argument("--budget", type=int, default=S, help="function evaluations per run")
    p.add_argument("--out", default=S, help="output directory")
    p.add_argument("--algo", action="append", default=S, help="algorithm id (repeatable)")
    p.add_argument("--func", action="append", default=S, help="function id or F-label (repeatable)")
    p.add_argument("--workers", type=int, default=S, help="worker processes")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="nsopt", parents=[common],
                                     description="NSO benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common], help="run an experiment grid")
    run.add_argument("config", nargs="?", help="key = value experiment file")
    run.add_argument("--timing", action="store_true", help="record wall-clock ms per run")
    run.add_argument("--quiet", action="store_true")
    sub.add_parser("list-functions", help="print the benchmark catalogue")
    sub.add_parser("list-algorithms", help="print registered optimizers")
    summ = sub.add_parser("summarize", help="mean/std table from a runs.json")
    summ.add_argument("runs_json")
    summ.add_argument("--out", dest="summary_out", help="also write summary.csv here")
    return parser


def _experiment_config(args) -> harness.ExperimentConfig:
    base = (harness.ExperimentConfig.from_file(args.config) if args.config
            else harness.ExperimentConfig())
    overrides = {}
    for key in ("seed", "dim", "runs", "budget", "out", "workers"):
        if hasattr(args, key):
            overrides[key] = getattr(args, key)
    if hasattr(args, "algo"):
        overrides["algos"] = tuple(args.algo)
    if hasattr(args, "func"):
        overrides["funcs"] = tuple(args.func)
    if args.timing:
        overrides["timing"] = True
    return harness.ExperimentConfig.from_mapping(overrides, base=base)


def cmd_run(args) -> int:
    cfg = _experiment_config(args)
    total = len(cfg.algos) * len(cfg.funcs) * cfg.runs
    done = []

    def progress(rec):
        done.append(rec)
        if not args.quiet:
            print("[%d/%d] %s %s run %d: %.6g" % (len(done), total, rec.algorithm,
                                                  rec.function, rec.run, rec.final_best),
                  file=sys.stderr)

    records = harness.run_experiment(cfg, progress)
    paths = harness.export(records, harness.summarize(records), cfg.out)
    if not args.quiet:
        print("wrote %s" % ", ".join(str(p) for p in paths.values()), file=sys.stderr)
    return EXIT_OK


def cmd_list_functions(args) -> int:
    print("id\tfunction\tname\ttype")
    for f in benchmarks.CATALOGUE:
        print("%s\t%s\t%s\t%s" % (f.id, f.label, f.name, f.type))
    return EXIT_OK


def cmd_list_algorithms(args) -> int:
    for spec in harness.ALGORITHMS.values():
        print("%s\t%s" % (spec.id, spec.description))
    return EXIT_OK


def cmd_summarize(args) -> int:
    cells = harness.summarize(harness.load_runs(args.runs_json))
    if args.summary_out:
        harness.write_summary_csv(args.summary_out, cells)
    print("algorithm,function,mean,std")
    for c in sorted(cells, key=lambda c: (c.function, c.algorithm)):
        print("%s,%s,%r,%r" % (c.algorithm, c.function, c.mean, c.std))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "list-functions": cmd_list_functions,
    "list-algorithms": cmd_list_algorithms,
    "summarize": cmd_summarize,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print("nsopt: error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except (NsoptError, OSError, ValueError) as exc:
        print("nsopt: error: %s" % exc, file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
