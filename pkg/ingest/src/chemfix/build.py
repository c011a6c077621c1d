"""Molecule-to-fixture pipeline.

Runs integrals, restricted Hartree-Fock, and configuration interaction, then
emits a VQSCI-FIX v1 document: real symmetric CI matrix over the selected
determinants (reference first, the rest ranked by groundstate amplitude),
normalized amplitudes, nuclear repulsion, and the exact CI energy when the
full space was solved.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from chemfix.basis import ANGSTROM_PER_BOHR, build_basis, nuclear_charges
from chemfix.ci import ci_matrix, solve_ground
from chemfix.determinants import (
    cisd_space,
    fci_space,
    hartree_fock_determinant,
    label,
)
from chemfix.integrals import (
    core_hamiltonian,
    electron_repulsion_tensor,
    mo_integrals,
    nuclear_repulsion,
    overlap_matrix,
)
from chemfix.scf import restricted_hartree_fock

DEFAULT_DIMENSION_CAP = 20_000

AMPLITUDE_FLOOR = 1e-8


class BuildError(ValueError):
    pass


@dataclass(frozen=True)
class MoleculeSpec:
    name: str
    elements: tuple[str, ...]
    coordinates_angstrom: tuple[tuple[float, float, float], ...]
    charge: int = 0
    multiplicity: int = 1
    basis: str = "sto-3g"

    def __post_init__(self):
        if len(self.elements) != len(self.coordinates_angstrom):
            raise BuildError(
                f"{len(self.elements)} elements but "
                f"{len(self.coordinates_angstrom)} coordinate rows"
            )
        if self.multiplicity != 1:
            raise BuildError("only closed-shell singlets are supported")
        if self.basis.lower() != "sto-3g":
            raise BuildError(f"unsupported basis {self.basis!r}")


@dataclass(frozen=True)
class FixtureBundle:
    """Build output: the document plus the energies tests care about."""

    document: dict
    hf_energy: float
    fci_energy: float | None
    nuclear_repulsion: float
    full_dimension: int
    method: str


def _binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def _ranked_order(amplitudes: np.ndarray, reference_index: int) -> np.ndarray:
    order = np.argsort(-np.abs(amplitudes), kind="stable")
    order = order[order != reference_index]
    return np.concatenate(([reference_index], order))


def build_fixture(
    spec: MoleculeSpec,
    max_dimension: int = DEFAULT_DIMENSION_CAP,
    keep: int | None = None,
    truncate_to: int | None = None,
    provenance_extra: dict | None = None,
) -> FixtureBundle:
    """Solve the molecule and assemble its fixture document.

    ``max_dimension`` caps the space that is solved exactly.  Beyond the cap
    the build refuses unless ``truncate_to`` asks for a ranked truncation, in
    which case the configuration space is limited to double excitations and
    no exact reference energy is recorded.  ``keep`` limits how many
    determinants are emitted (the matrix stays exact over the kept subset).
    """
    elements = tuple(spec.elements)
    centers_bohr = [
        tuple(float(x) / ANGSTROM_PER_BOHR for x in row)
        for row in spec.coordinates_angstrom
    ]
    charges = nuclear_charges(elements)
    n_electrons = int(charges.sum()) - spec.charge
    if n_electrons < 2 or n_electrons % 2:
        raise BuildError(
            f"spin restriction needs an even electron count, got {n_electrons}"
        )

    basis = build_basis(elements, centers_bohr)
    n_orbitals = len(basis)
    n_pair = n_electrons // 2
    full_dimension = _binomial(n_orbitals, n_pair) ** 2

    overlap = overlap_matrix(basis)
    hcore = core_hamiltonian(basis, charges, centers_bohr)
    eri = electron_repulsion_tensor(basis)
    e_nuclear = nuclear_repulsion(charges, centers_bohr)
    scf = restricted_hartree_fock(overlap, hcore, eri, n_electrons, e_nuclear)
    h_mo, g_mo = mo_integrals(scf.mo_coefficients, hcore, eri)

    if full_dimension <= max_dimension:
        method = "fci"
        dets = fci_space(n_orbitals, n_pair, n_pair)
    else:
        if truncate_to is None:
            raise BuildError(
                f"configuration space {full_dimension} exceeds the cap "
                f"{max_dimension} and no truncation was requested"
            )
        method = "cisd"
        dets = cisd_space(n_orbitals, n_pair, n_pair)

    ground = solve_ground(dets, h_mo, g_mo)
    fci_energy = (
        ground.electronic_energy + e_nuclear if method == "fci" else None
    )

    reference = hartree_fock_determinant(n_orbitals, n_pair, n_pair)
    reference_index = dets.index(reference)
    order = _ranked_order(ground.amplitudes, reference_index)
    # Determinants with numerically vanishing weight (symmetry-forbidden in
    # the groundstate) carry no information and their relative order is
    # floating-point noise, so they are never emitted.
    meaningful = int(np.count_nonzero(np.abs(ground.amplitudes[order]) > AMPLITUDE_FLOOR))
    limit = max(1, meaningful)
    if method == "cisd":
        limit = min(limit, int(truncate_to))
    if keep is not None:
        if keep < 1:
            raise BuildError(f"keep must be positive, got {keep}")
        limit = min(limit, int(keep))
    kept = order[:limit]

    kept_dets = [dets[int(i)] for i in kept]
    kept_amplitudes = ground.amplitudes[kept]
    norm = float(np.sqrt(np.sum(kept_amplitudes**2)))
    if norm <= 0:
        raise BuildError("groundstate amplitudes vanished on the kept subset")
    kept_amplitudes = kept_amplitudes / norm

    matrix = ci_matrix(kept_dets, h_mo, g_mo)
    hf_diagonal = float(matrix[0, 0])
    if abs(hf_diagonal - scf.electronic_energy) > 1e-6:
        raise BuildError(
            "reference determinant energy "
            f"{hf_diagonal:.10f} disagrees with the self-consistent field "
            f"value {scf.electronic_energy:.10f}"
        )

    labels = [label(det, n_orbitals) for det in kept_dets]
    provenance = {
        "molecule": spec.name,
        "basis": spec.basis,
        "method": method,
        "geometry_angstrom": "; ".join(
            f"{el} {x:.10f} {y:.10f} {z:.10f}"
            for el, (x, y, z) in zip(elements, spec.coordinates_angstrom)
        ),
        "full_dimension": str(full_dimension),
        "generator": "chemfix 0.1.0",
    }
    if provenance_extra:
        provenance.update({str(k): str(v) for k, v in provenance_extra.items()})

    document = {
        "version": 1,
        "dimension": len(kept_dets),
        "storage": "dense" if len(kept_dets) <= 8 else "sparse",
        "matrix": matrix,
        "determinant_labels": labels,
        "amplitudes": kept_amplitudes,
        "n_electrons": n_electrons,
        "n_spin_orbitals": 2 * n_orbitals,
        "nuclear_repulsion": e_nuclear,
        "reference_fci_energy": fci_energy,
        "provenance": provenance,
    }
    return FixtureBundle(
        document=document,
        hf_energy=scf.energy,
        fci_energy=fci_energy,
        nuclear_repulsion=e_nuclear,
        full_dimension=full_dimension,
        method=method,
    )


def _number(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise BuildError(f"non-finite value {x!r} cannot be serialized")
    return repr(float(x))


def render_document(document: dict) -> str:
    """Serialize to the fixture text format, one matrix entry per line."""
    matrix = document["matrix"]
    dim = int(document["dimension"])
    lines = ["{"]
    lines.append('"version": 1,')
    lines.append(f'"dimension": {dim},')
    lines.append(f'"storage": {json.dumps(document["storage"])},')
    lines.append('"entries": [')
    entry_lines = []
    if document["storage"] == "dense":
        for j in range(dim):
            for k in range(dim):
                entry_lines.append(f"[{_number(matrix[j, k])}, 0.0]")
    else:
        for j in range(dim):
            for k in range(j, dim):
                value = matrix[j, k]
                if value != 0.0:
                    entry_lines.append(f"[{j}, {k}, {_number(value)}, 0.0]")
    for i, line in enumerate(entry_lines):
        lines.append(line + ("," if i + 1 < len(entry_lines) else ""))
    lines.append("],")
    lines.append(f'"determinant_labels": {json.dumps(list(document["determinant_labels"]))},')
    amplitudes = ", ".join(_number(a) for a in document["amplitudes"])
    lines.append(f'"amplitudes": [{amplitudes}],')
    lines.append(f'"n_electrons": {int(document["n_electrons"])},')
    lines.append(f'"n_spin_orbitals": {int(document["n_spin_orbitals"])},')
    lines.append(f'"nuclear_repulsion": {_number(document["nuclear_repulsion"])},')
    if document["reference_fci_energy"] is not None:
        lines.append(
            f'"reference_fci_energy": {_number(document["reference_fci_energy"])},'
        )
    lines.append(f'"provenance": {json.dumps(document["provenance"], indent=1)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_fixture(bundle: FixtureBundle, path) -> None:
    Path(path).write_text(render_document(bundle.document))
