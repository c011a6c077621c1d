"""Solve the committed 2x2 hydrogen fixture, exact then shot-sampled.

Usage: python scripts/h2_demo.py [--shots N] [--seed K]
"""

import argparse
from pathlib import Path

from vqsci.measurement import ShotPlan
from vqsci.vqsci_driver import RunConfig, run

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "h2_golden.json"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--shots", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    exact = run(RunConfig(fixture_path=str(FIXTURE), mode="exact"))
    print(f"exact    tail mean {exact.tail_mean:+.10f} Ha")
    print(f"         reference {exact.energy_sci_exact:+.10f} Ha")
    print(f"         gap {exact.delta_sci:.3e} Ha in {exact.trace.iterations_used} iterations")

    sampled = run(
        RunConfig(
            fixture_path=str(FIXTURE),
            mode="sampled",
            shot_plan=ShotPlan(args.shots, args.seed),
        )
    )
    print(f"sampled  tail mean {sampled.tail_mean:+.10f} Ha  (S={args.shots}, seed={args.seed})")
    print(f"         gap {sampled.delta_sci:.3e} Ha, tail std {sampled.tail_std:.3e} Ha")


if __name__ == "__main__":
    main()
