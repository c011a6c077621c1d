"""Session fixtures: every molecule in the manifest is built at most once."""

from pathlib import Path

import pytest

from chemfix.basis import ANGSTROM_PER_BOHR, build_basis, nuclear_charges
from chemfix.build import build_fixture
from chemfix.integrals import (
    core_hamiltonian,
    electron_repulsion_tensor,
    nuclear_repulsion,
    overlap_matrix,
)
from chemfix.molecules import PAPER_RECIPES
from chemfix.scf import restricted_hartree_fock

REPO_ROOT = Path(__file__).resolve().parents[2]

RECIPES_BY_STEM = {Path(r.filename).stem: r for r in PAPER_RECIPES}


@pytest.fixture(scope="session")
def committed_fixtures_dir() -> Path:
    return REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def bundles():
    """Regenerated bundles for every molecule whose full space fits the cap."""
    out = {}
    for stem in ("h2_sto3g", "lih_r1500", "beh2_sto3g", "h2o_sto3g", "nh3_sto3g"):
        recipe = RECIPES_BY_STEM[stem]
        out[stem] = build_fixture(
            recipe.spec,
            keep=recipe.keep,
            truncate_to=recipe.truncate_to,
            provenance_extra=recipe.provenance_extra,
        )
    return out


@pytest.fixture(scope="session")
def ethylene_scf():
    """Self-consistent field for the one molecule too large to solve exactly."""
    recipe = RECIPES_BY_STEM["c2h4_sto3g"]
    elements = tuple(recipe.spec.elements)
    centers = [
        tuple(float(x) / ANGSTROM_PER_BOHR for x in row)
        for row in recipe.spec.coordinates_angstrom
    ]
    charges = nuclear_charges(elements)
    basis = build_basis(elements, centers)
    return restricted_hartree_fock(
        overlap_matrix(basis),
        core_hamiltonian(basis, charges, centers),
        electron_repulsion_tensor(basis),
        int(charges.sum()),
        nuclear_repulsion(charges, centers),
    )
