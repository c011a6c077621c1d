"""Minimal-basis electronic structure engine for fixture generation.

Everything runs in restricted (closed-shell) form: RHF orbitals, spatial-MO
integrals, and configuration interaction over spin-restricted determinants.
The end product is a VQSCI-FIX v1 document per molecule.
"""

from chemfix.build import BuildError, FixtureBundle, MoleculeSpec, build_fixture, write_fixture
from chemfix.scf import ScfError

__all__ = [
    "BuildError",
    "FixtureBundle",
    "MoleculeSpec",
    "ScfError",
    "build_fixture",
    "write_fixture",
]
