"""Solve one config at several trimming thresholds and tabulate the outcome.

    python3 scripts/gamma_sweep.py benchmark/config.json --gammas 0 0.5 1 2
"""

import argparse
import csv
import dataclasses
import sys

from kwopt.config import load_run_config
from kwopt.economics import EconConfig
from kwopt.money import format_micros
from kwopt.solver import solve


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("config")
    p.add_argument("--gammas", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0])
    args = p.parse_args(argv)

    run = load_run_config(args.config)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["gamma", "iterations", "reason", "target_size", "payoff", "f1"])
    for gamma in args.gammas:
        plan = dataclasses.replace(run.plan, econ=EconConfig(gamma))
        structure, trace = solve(plan, run.solve)
        w.writerow([gamma, len(trace.rows), trace.terminated_reason, len(structure.target),
                    format_micros(structure.payoff), f"{structure.f1:.6f}"])


if __name__ == "__main__":
    main()
