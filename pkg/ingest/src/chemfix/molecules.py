"""Manifest of the molecules shipped as fixtures.

Each entry pins the geometry, the emission size, and the output file name.
Geometries are equilibrium structures (NIST CCCBDB values for the heavier
molecules); the LiH entries sample the dissociation coordinate.
"""

import math
from dataclasses import dataclass, field

from chemfix.build import MoleculeSpec

__all__ = [
    "FixtureRecipe",
    "GROWING_BASIS_PROFILES",
    "LIH_CURVE_ANGSTROM",
    "PAPER_RECIPES",
    "recipe_names",
]


@dataclass(frozen=True)
class FixtureRecipe:
    """One fixture to generate: molecule, emission size, output name."""

    spec: MoleculeSpec
    filename: str
    keep: int
    truncate_to: int | None = None
    provenance_extra: dict = field(default_factory=dict)


def _h2(distance: float) -> MoleculeSpec:
    return MoleculeSpec(
        name="H2",
        elements=("H", "H"),
        coordinates_angstrom=((0.0, 0.0, 0.0), (0.0, 0.0, distance)),
    )


def _lih(distance: float) -> MoleculeSpec:
    return MoleculeSpec(
        name="LiH",
        elements=("Li", "H"),
        coordinates_angstrom=((0.0, 0.0, 0.0), (0.0, 0.0, distance)),
    )


def _beh2(bond: float) -> MoleculeSpec:
    return MoleculeSpec(
        name="BeH2",
        elements=("Be", "H", "H"),
        coordinates_angstrom=((0.0, 0.0, 0.0), (0.0, 0.0, bond), (0.0, 0.0, -bond)),
    )


def _h2o(bond: float, angle_deg: float) -> MoleculeSpec:
    half = math.radians(angle_deg) / 2.0
    x = bond * math.sin(half)
    z = bond * math.cos(half)
    return MoleculeSpec(
        name="H2O",
        elements=("O", "H", "H"),
        coordinates_angstrom=((0.0, 0.0, 0.0), (x, 0.0, z), (-x, 0.0, z)),
    )


def _nh3(n_h: float, h_h: float) -> MoleculeSpec:
    # Pyramid with the C3 axis on z: H triangle in the z=0 plane, N above it.
    radius = h_h / math.sqrt(3.0)
    height = math.sqrt(n_h * n_h - radius * radius)
    coords = [(0.0, 0.0, height)]
    for deg in (90.0, 210.0, 330.0):
        a = math.radians(deg)
        coords.append((radius * math.cos(a), radius * math.sin(a), 0.0))
    return MoleculeSpec(
        name="NH3",
        elements=("N", "H", "H", "H"),
        coordinates_angstrom=tuple(coords),
    )


def _c2h4(c_c: float, c_h: float, hch_deg: float) -> MoleculeSpec:
    # Planar D2h frame: C-C on z, all atoms in the x-z plane.
    half = math.radians(hch_deg) / 2.0
    x = c_h * math.sin(half)
    z = c_c / 2.0 + c_h * math.cos(half)
    return MoleculeSpec(
        name="C2H4",
        elements=("C", "C", "H", "H", "H", "H"),
        coordinates_angstrom=(
            (0.0, 0.0, c_c / 2.0),
            (0.0, 0.0, -c_c / 2.0),
            (x, 0.0, z),
            (-x, 0.0, z),
            (x, 0.0, -z),
            (-x, 0.0, -z),
        ),
    )


LIH_CURVE_ANGSTROM = (1.2, 1.5, 2.0, 3.0, 3.7)


def _lih_recipes() -> list[FixtureRecipe]:
    recipes = []
    for distance in LIH_CURVE_ANGSTROM:
        tag = f"{int(round(distance * 1000)):04d}"
        recipes.append(
            FixtureRecipe(
                spec=_lih(distance),
                filename=f"lih_r{tag}.json",
                keep=64,
                provenance_extra={"bond_length_angstrom": repr(distance)},
            )
        )
    return recipes


PAPER_RECIPES: tuple[FixtureRecipe, ...] = (
    FixtureRecipe(
        spec=_h2(0.745),
        filename="h2_sto3g.json",
        keep=2,
        provenance_extra={"bond_length_angstrom": "0.745"},
    ),
    *_lih_recipes(),
    FixtureRecipe(spec=_beh2(1.3), filename="beh2_sto3g.json", keep=64),
    FixtureRecipe(spec=_h2o(0.955, 105.0), filename="h2o_sto3g.json", keep=64),
    FixtureRecipe(spec=_nh3(1.0325, 1.6291), filename="nh3_sto3g.json", keep=128),
    FixtureRecipe(
        spec=_c2h4(1.306, 1.082, 115.6),
        filename="c2h4_sto3g.json",
        keep=1024,
        truncate_to=8192,
    ),
)


def recipe_names() -> list[str]:
    return [r.filename for r in PAPER_RECIPES]


# Electron count and spin-orbital counts for standard basis-set progressions,
# used by the qubit/Pauli-string scaling comparison.  Values are 2x the
# contracted spatial function count of each basis.
GROWING_BASIS_PROFILES: dict[str, dict] = {
    "H2": {
        "n_electrons": 2,
        "spin_orbitals": {
            "sto-3g": 4,
            "6-31g": 8,
            "6-311g": 12,
            "cc-pvdz": 20,
            "cc-pvtz": 56,
            "cc-pvqz": 120,
        },
    },
    "LiH": {
        "n_electrons": 4,
        "spin_orbitals": {
            "sto-3g": 12,
            "6-31g": 22,
            "6-311g": 32,
            "cc-pvdz": 38,
            "cc-pvtz": 88,
            "cc-pvqz": 170,
        },
    },
    "BeH2": {
        "n_electrons": 6,
        "spin_orbitals": {
            "sto-3g": 14,
            "6-31g": 26,
            "6-311g": 38,
            "cc-pvdz": 48,
            "cc-pvtz": 116,
            "cc-pvqz": 230,
        },
    },
}
