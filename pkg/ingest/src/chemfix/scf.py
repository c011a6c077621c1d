"""Restricted Hartree-Fock with Pulay convergence acceleration."""

from dataclasses import dataclass

import numpy as np


class ScfError(ValueError):
    pass


@dataclass(frozen=True)
class ScfResult:
    energy: float
    electronic_energy: float
    mo_coefficients: np.ndarray
    orbital_energies: np.ndarray
    iterations: int


def _orthogonalizer(overlap: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = np.linalg.eigh(overlap)
    if eigenvalues[0] <= 1e-10:
        raise ScfError(
            f"overlap matrix is near-singular (smallest eigenvalue {eigenvalues[0]:.3e})"
        )
    return vectors @ np.diag(eigenvalues**-0.5) @ vectors.T


def _fock(hcore, eri, density):
    coulomb = np.einsum("pqrs,rs->pq", eri, density, optimize=True)
    exchange = np.einsum("prqs,rs->pq", eri, density, optimize=True)
    return hcore + coulomb - 0.5 * exchange


def _diis_extrapolate(focks, errors):
    m = len(focks)
    b = np.empty((m + 1, m + 1))
    b[-1, :] = -1.0
    b[:, -1] = -1.0
    b[-1, -1] = 0.0
    for i in range(m):
        for j in range(m):
            b[i, j] = float(np.sum(errors[i] * errors[j]))
    rhs = np.zeros(m + 1)
    rhs[-1] = -1.0
    try:
        weights = np.linalg.solve(b, rhs)[:m]
    except np.linalg.LinAlgError:
        return focks[-1]
    mixed = np.zeros_like(focks[-1])
    for w, f in zip(weights, focks):
        mixed += w * f
    return mixed


def restricted_hartree_fock(
    overlap,
    hcore,
    eri,
    n_electrons: int,
    e_nuclear: float,
    max_iterations: int = 200,
    energy_tol: float = 1e-11,
    gradient_tol: float = 1e-8,
) -> ScfResult:
    """Closed-shell self-consistent field in the given AO basis.

    Doubly occupies the ``n_electrons // 2`` lowest orbitals; raises ScfError
    if the electron count is odd or the cycle fails to converge.
    """
    if n_electrons < 2 or n_electrons % 2:
        raise ScfError(
            f"spin restriction needs a positive even electron count, got {n_electrons}"
        )
    n_occ = n_electrons // 2
    if n_occ > overlap.shape[0]:
        raise ScfError(
            f"{n_electrons} electrons need {n_occ} orbitals, basis has {overlap.shape[0]}"
        )
    x = _orthogonalizer(overlap)
    fock = hcore.copy()
    previous_energy = 0.0
    focks: list[np.ndarray] = []
    errors: list[np.ndarray] = []
    for iteration in range(1, max_iterations + 1):
        energies, rotated = np.linalg.eigh(x.T @ fock @ x)
        coefficients = x @ rotated
        occupied = coefficients[:, :n_occ]
        density = 2.0 * occupied @ occupied.T
        fock = _fock(hcore, eri, density)
        electronic = 0.5 * float(np.sum(density * (hcore + fock)))
        gradient = x.T @ (fock @ density @ overlap - overlap @ density @ fock) @ x
        if (
            abs(electronic - previous_energy) < energy_tol
            and float(np.max(np.abs(gradient))) < gradient_tol
        ):
            return ScfResult(
                energy=electronic + e_nuclear,
                electronic_energy=electronic,
                mo_coefficients=coefficients,
                orbital_energies=energies,
                iterations=iteration,
            )
        previous_energy = electronic
        focks.append(fock)
        errors.append(gradient)
        if len(focks) > 8:
            focks.pop(0)
            errors.pop(0)
        if len(focks) >= 2:
            fock = _diis_extrapolate(focks, errors)
    raise ScfError(f"self-consistent field did not converge in {max_iterations} iterations")
