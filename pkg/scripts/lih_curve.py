"""Lithium hydride dissociation curve from the committed fixtures.

Shot-sampled by default to show how the sampled-mode error grows with bond
stretch; pass --exact for the noiseless curve.

Usage: python scripts/lih_curve.py [--exact] [--shots N] [--seed K]
"""

import argparse
from pathlib import Path

from vqsci.measurement import ShotPlan
from vqsci.vqsci_driver import RunConfig, dissociation_curve

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--exact", action="store_true")
    parser.add_argument("--shots", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    paths = sorted(FIXTURES.glob("lih_r*.json"))
    if args.exact:
        config = RunConfig(mode="exact")
    else:
        config = RunConfig(mode="sampled", shot_plan=ShotPlan(args.shots, args.seed))

    rows = dissociation_curve(paths, config)
    rows.sort(key=lambda row: row["distance_angstrom"])
    print(f"{'R (A)':>7} {'tail mean (Ha)':>18} {'FCI (Ha)':>14} {'|error| (Ha)':>14}")
    for row in rows:
        print(
            f"{row['distance_angstrom']:>7.3f} {row['tail_mean_hartree']:>+18.8f} "
            f"{row['energy_fci_hartree']:>+14.6f} {row['delta_fci_hartree']:>14.3e}"
        )


if __name__ == "__main__":
    main()
