"""Register-size, term-count, and sparsity arithmetic for solver planning.

All counts are exact integers except p_sci_estimate, which is an asymptotic
closed-form estimate and is labeled as such wherever it is emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ResourceError",
    "ResourceProfile",
    "KNOWN_MOLECULES",
    "d_fci",
    "build_profile",
    "qubit_table",
    "pauli_upper_bound",
    "p_sci_estimate",
    "slater_condon_sparsity_bound",
    "execution_cost",
]


class ResourceError(ValueError):
    pass


# name -> (electrons, spin orbitals, selected determinant count)
KNOWN_MOLECULES: dict[str, tuple[int, int, int]] = {
    "H2": (2, 4, 2),
    "LiH": (4, 12, 8),
    "BeH2": (6, 14, 16),
    "H2O": (10, 14, 32),
    "NH3": (10, 16, 64),
    "C2H4": (16, 28, 4096),
}


@dataclass(frozen=True)
class ResourceProfile:
    n_electrons: int
    n_spin_orbitals: int
    d_fci: int
    d_sci: int
    q_vqe: int
    q_fci: int
    q_sci: int
    p_upper_fci: int
    p_upper_sci: int
    p_sci_estimate: float
    sparsity_bound: int


def d_fci(n_electrons: int, n_spin_orbitals: int, spin_restricted: bool = True) -> int:
    """Full determinant-space dimension for N electrons in M spin orbitals."""
    if n_electrons < 1 or n_electrons > n_spin_orbitals:
        raise ResourceError(f"need 0 < N <= M, got N={n_electrons}, M={n_spin_orbitals}")
    if spin_restricted:
        if n_electrons % 2 or n_spin_orbitals % 2:
            raise ResourceError("spin-restricted counting requires even N and M")
        return math.comb(n_spin_orbitals // 2, n_electrons // 2) ** 2
    return math.comb(n_spin_orbitals, n_electrons)


def _ceil_log2(value: int) -> int:
    if value < 1:
        raise ResourceError(f"cannot take log2 of {value}")
    return (value - 1).bit_length()


def pauli_upper_bound(qubits: int) -> int:
    """All-axes string count 4**q for a q-qubit register."""
    if not 0 <= qubits <= 62:
        raise ResourceError(f"qubit count {qubits} outside [0, 62]")
    return 1 << (2 * qubits)


def p_sci_estimate(n_electrons: int, n_spin_orbitals: int) -> float:
    """Closed-form estimate (M/2)**N / ((N/2)!)**2 of distinct string count."""
    if n_electrons % 2:
        raise ResourceError("estimate requires an even electron count")
    return (n_spin_orbitals / 2) ** n_electrons / math.factorial(n_electrons // 2) ** 2


def slater_condon_sparsity_bound(n_electrons: int, n_spin_orbitals: int) -> int:
    """Per-row nonzero bound: singles + doubles + diagonal."""
    if n_spin_orbitals < n_electrons:
        raise ResourceError("need M >= N")
    virtuals = n_spin_orbitals - n_electrons
    singles = n_electrons * virtuals
    doubles = math.comb(n_electrons, 2) * math.comb(virtuals, 2)
    return singles + doubles + 1


def execution_cost(layers: int, strings: int, shots: int, iterations: int) -> int:
    """Total circuit executions L*P*S*I with unit constants."""
    for name, value in (
        ("layers", layers),
        ("strings", strings),
        ("shots", shots),
        ("iterations", iterations),
    ):
        if value < 1:
            raise ResourceError(f"{name} must be positive, got {value}")
    return layers * strings * shots * iterations


def build_profile(
    n_electrons: int,
    n_spin_orbitals: int,
    d_sci: int,
    spin_restricted: bool = True,
) -> ResourceProfile:
    full = d_fci(n_electrons, n_spin_orbitals, spin_restricted)
    if not 1 <= d_sci <= full:
        raise ResourceError(f"d_sci={d_sci} outside [1, {full}]")
    q_fci = _ceil_log2(full)
    q_sci = _ceil_log2(d_sci)
    return ResourceProfile(
        n_electrons=n_electrons,
        n_spin_orbitals=n_spin_orbitals,
        d_fci=full,
        d_sci=d_sci,
        q_vqe=n_spin_orbitals,
        q_fci=q_fci,
        q_sci=q_sci,
        p_upper_fci=pauli_upper_bound(q_fci),
        p_upper_sci=pauli_upper_bound(q_sci),
        p_sci_estimate=p_sci_estimate(n_electrons, n_spin_orbitals),
        sparsity_bound=slater_condon_sparsity_bound(n_electrons, n_spin_orbitals),
    )


def qubit_table(molecules: dict[str, tuple[int, int, int]] | None = None):
    """(name, profile) rows for each molecule; defaults to the built-in set."""
    table = KNOWN_MOLECULES if molecules is None else molecules
    return [(name, build_profile(n, m, d)) for name, (n, m, d) in table.items()]
