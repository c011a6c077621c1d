"""Determinant-count convergence study: energy error vs register size.

Runs one exact solve per qubit count and prints where the truncated problem
crosses chemical accuracy against the fixture's reference energy.

Usage: python scripts/crossing_study.py [--fixture PATH] [--max-qubits Q]
"""

import argparse
from pathlib import Path

from vqsci.vqsci_driver import RunConfig, convergence_study

CHEMICAL_ACCURACY = 0.0016

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def study(fixture, max_qubits):
    rows = convergence_study(
        fixture, range(1, max_qubits + 1), RunConfig(mode="exact", padding="extend")
    )
    print(f"\n{Path(fixture).name}")
    print(f"{'dets':>6} {'tail mean (Ha)':>18} {'vs reference (Ha)':>18}  within")
    for row in rows:
        delta = row["delta_reference_hartree"]
        mark = "yes" if delta <= CHEMICAL_ACCURACY else "no"
        print(
            f"{row['determinant_count']:>6} {row['tail_mean_hartree']:>+18.8f} "
            f"{delta:>18.3e}  {mark}"
        )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--fixture", action="append", help="fixture path, repeatable")
    parser.add_argument("--max-qubits", type=int, default=None)
    args = parser.parse_args()

    jobs = (
        [(f, args.max_qubits or 6) for f in args.fixture]
        if args.fixture
        else [(FIXTURES / "h2o_sto3g.json", 6), (FIXTURES / "nh3_sto3g.json", 7)]
    )
    for fixture, max_qubits in jobs:
        study(fixture, args.max_qubits or max_qubits)


if __name__ == "__main__":
    main()
