"""Fixture generation command line.

Subcommands: list, build, build-all, profiles.  Fixture files land in the
--out directory; a JSON summary of what was built goes to stdout and progress
goes to stderr.  Exit codes: 0 success, 1 domain failure (unknown name, SCF
non-convergence, build refusal), 2 output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from chemfix.build import build_fixture, write_fixture
from chemfix.molecules import GROWING_BASIS_PROFILES, PAPER_RECIPES, FixtureRecipe

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the domain-failure code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _select_recipes(name: str) -> list[FixtureRecipe]:
    wanted = name.lower()
    matches = [
        recipe
        for recipe in PAPER_RECIPES
        if recipe.spec.name.lower() == wanted or Path(recipe.filename).stem == wanted
    ]
    if not matches:
        known = sorted({r.spec.name.lower() for r in PAPER_RECIPES})
        stems = [Path(r.filename).stem for r in PAPER_RECIPES]
        raise ValueError(
            f"unknown molecule {name!r}; molecules: {', '.join(known)}; "
            f"fixtures: {', '.join(stems)}"
        )
    return matches


def _build_many(recipes: list[FixtureRecipe], out_dir: str) -> str:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    summary = []
    for recipe in recipes:
        print(f"building {recipe.filename} ...", file=sys.stderr, flush=True)
        start = time.perf_counter()
        bundle = build_fixture(
            recipe.spec,
            keep=recipe.keep,
            truncate_to=recipe.truncate_to,
            provenance_extra=recipe.provenance_extra,
        )
        write_fixture(bundle, directory / recipe.filename)
        elapsed = time.perf_counter() - start
        print(
            f"  {recipe.spec.name}: dimension {bundle.document['dimension']} "
            f"of {bundle.full_dimension} ({bundle.method}), {elapsed:.1f}s",
            file=sys.stderr,
            flush=True,
        )
        summary.append(
            {
                "file": recipe.filename,
                "molecule": recipe.spec.name,
                "method": bundle.method,
                "dimension": bundle.document["dimension"],
                "full_dimension": bundle.full_dimension,
                "hf_energy_hartree": bundle.hf_energy,
                "fci_energy_hartree": bundle.fci_energy,
            }
        )
    return json.dumps(summary, indent=2) + "\n"


def _cmd_list(args) -> str:
    rows = [
        {
            "file": recipe.filename,
            "molecule": recipe.spec.name,
            "atoms": len(recipe.spec.elements),
            "basis": recipe.spec.basis,
            "keep": recipe.keep,
            "truncate_to": recipe.truncate_to,
        }
        for recipe in PAPER_RECIPES
    ]
    return json.dumps(rows, indent=2) + "\n"


def _cmd_build(args) -> str:
    return _build_many(_select_recipes(args.molecule), args.out)


def _cmd_build_all(args) -> str:
    return _build_many(list(PAPER_RECIPES), args.out)


def _cmd_profiles(args) -> str:
    return json.dumps(GROWING_BASIS_PROFILES, indent=2) + "\n"


def _build_parser() -> _Parser:
    parser = _Parser(prog="chemfix", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    listing = subs.add_parser("list", help="show the fixture manifest")
    listing.set_defaults(handler=_cmd_list)

    build = subs.add_parser("build", help="generate fixtures for one molecule")
    build.add_argument(
        "--molecule", required=True,
        help="molecule name (all its fixtures) or a single fixture file stem",
    )
    build.add_argument("--out", required=True, help="output directory for fixture JSON")
    build.set_defaults(handler=_cmd_build)

    everything = subs.add_parser("build-all", help="generate every fixture in the manifest")
    everything.add_argument("--out", required=True, help="output directory for fixture JSON")
    everything.set_defaults(handler=_cmd_build_all)

    profiles = subs.add_parser(
        "profiles", help="electron and spin-orbital counts for growing basis sets"
    )
    profiles.set_defaults(handler=_cmd_profiles)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.handler(args)
    except OSError as exc:
        print(f"chemfix: error: cannot write fixtures: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"chemfix: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
