"""Rebuild every fixture from scratch and diff against the committed copies.

The ethylene entry solves a 3241-determinant truncated CI problem and
dominates the runtime; use --only to rebuild a subset.

Usage: python scripts/regenerate_fixtures.py [--out DIR] [--only NAME ...]
"""

import argparse
import json
import time
from pathlib import Path

import numpy as np

from chemfix.build import build_fixture, write_fixture
from chemfix.molecules import PAPER_RECIPES

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def parse_matrix(path):
    document = json.loads(Path(path).read_text())
    dim = document["dimension"]
    matrix = np.zeros((dim, dim))
    if document["storage"] == "dense":
        for idx, (real, _imag) in enumerate(document["entries"]):
            matrix[idx // dim, idx % dim] = real
    else:
        for j, k, real, _imag in document["entries"]:
            matrix[int(j), int(k)] = matrix[int(k), int(j)] = real
    return matrix


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", type=Path, default=FIXTURES)
    parser.add_argument("--only", nargs="*", help="molecule names, e.g. H2 LiH")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for recipe in PAPER_RECIPES:
        if args.only and recipe.spec.name not in args.only:
            continue
        started = time.perf_counter()
        bundle = build_fixture(
            recipe.spec,
            keep=recipe.keep,
            truncate_to=recipe.truncate_to,
            provenance_extra=recipe.provenance_extra,
        )
        target = args.out / recipe.filename
        committed = FIXTURES / recipe.filename
        drift = ""
        if committed.exists():
            old = parse_matrix(committed)
            if old.shape == bundle.document["matrix"].shape:
                gap = np.max(np.abs(old - bundle.document["matrix"]))
                drift = f"  max drift vs committed {gap:.2e} Ha"
            else:
                drift = f"  dimension changed from {old.shape[0]}"
        write_fixture(bundle, target)
        elapsed = time.perf_counter() - started
        fci = "" if bundle.fci_energy is None else f"  fci {bundle.fci_energy:+.6f}"
        print(
            f"{recipe.filename:<18} dim {bundle.document['dimension']:>4}  "
            f"hf {bundle.hf_energy:+.6f}{fci}{drift}  ({elapsed:.1f} s)"
        )


if __name__ == "__main__":
    main()
