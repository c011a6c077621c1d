"""Exact eigensolver reference and configuration-selection logic.

The selection loop reproduces the classical half of the solver: rank basis
configurations by weight, then double the kept count (one more qubit at a
time) until the ground energy of the kept principal submatrix is within a
threshold of the reference energy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .matrix_model import HermitianMatrix, MatrixFixture, principal_submatrix

__all__ = [
    "OracleError",
    "GroundstateSolution",
    "SelectionReport",
    "exact_ground",
    "rank_configurations",
    "select_minimal_qubits",
]

DENSE_LIMIT = 16384
RESIDUAL_FACTOR = 1e-8


class OracleError(RuntimeError):
    """Raised when an eigensolve fails to converge or violates its residual."""


@dataclass(frozen=True)
class GroundstateSolution:
    energy: float
    eigenvector: np.ndarray
    method: str  # "dense" | "iterative"
    residual_norm: float


@dataclass(frozen=True)
class SelectionReport:
    ordering: np.ndarray
    chosen_q: int
    chosen_count: int
    achieved_energy: float
    reference_energy: float
    reference_kind: str  # "fci" | "self-referential"
    threshold_met: bool


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, HermitianMatrix):
        return matrix.data
    return np.asarray(matrix, dtype=np.complex128)


def exact_ground(matrix) -> GroundstateSolution:
    """Lowest eigenpair of a Hermitian matrix, residual-checked.

    Dense solve up to 16384 rows; a Lanczos-style iterative solve seeded at
    the first basis vector beyond that.  The returned residual satisfies
    ``norm(M v - E v) < 1e-8 * norm(M)`` (Frobenius) or OracleError is raised.
    """
    data = _as_array(matrix)
    dim = data.shape[0]
    if dim == 1:
        value = float(data[0, 0].real)
        return GroundstateSolution(value, np.ones(1, dtype=np.complex128), "dense", 0.0)
    if dim <= DENSE_LIMIT:
        values, vectors = scipy.linalg.eigh(data, subset_by_index=(0, 0))
        energy = float(values[0])
        vector = np.ascontiguousarray(vectors[:, 0])
        method = "dense"
    else:
        v0 = np.zeros(dim)
        v0[0] = 1.0
        try:
            values, vectors = scipy.sparse.linalg.eigsh(
                scipy.sparse.csr_matrix(data), k=1, which="SA", v0=v0, maxiter=50 * dim
            )
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise OracleError(f"iterative eigensolve did not converge for D={dim}") from exc
        energy = float(values[0])
        vector = np.ascontiguousarray(vectors[:, 0].astype(np.complex128))
        method = "iterative"
    vector = vector / np.linalg.norm(vector)
    residual = float(np.linalg.norm(data @ vector - energy * vector))
    scale = float(np.linalg.norm(data))
    if residual >= RESIDUAL_FACTOR * max(scale, 1e-300):
        raise OracleError(
            f"eigenpair residual {residual:.3e} exceeds {RESIDUAL_FACTOR:.0e} * {scale:.3e}"
        )
    return GroundstateSolution(energy, vector, method, residual)


def rank_configurations(amplitudes) -> np.ndarray:
    """Indices sorted by descending |amplitude|, ties by ascending index."""
    amps = np.asarray(amplitudes)
    if amps.ndim != 1 or amps.shape[0] == 0:
        raise OracleError("amplitudes must be a nonempty vector")
    return np.argsort(-np.abs(amps), kind="stable")


def select_minimal_qubits(fixture: MatrixFixture, threshold: float = 0.0016) -> SelectionReport:
    """Smallest qubit count whose top-weight submatrix reaches ``threshold``.

    Kept counts are min(2**q, D) for q = 1, 2, ...; the reference is the
    fixture's stored FCI energy when present, otherwise the full matrix's own
    ground energy.  Failure to reach the threshold at full dimension is
    reported via ``threshold_met``, not raised.
    """
    if threshold <= 0:
        raise OracleError("threshold must be positive")
    matrix = fixture.matrix
    dim = matrix.dimension
    shift = fixture.determinants.nuclear_repulsion or 0.0
    full = None
    if fixture.determinants.amplitudes is not None:
        amplitudes = fixture.determinants.amplitudes
    else:
        full = exact_ground(matrix)
        amplitudes = full.eigenvector
    ordering = rank_configurations(amplitudes)
    if fixture.determinants.reference_fci_energy is not None:
        reference = fixture.determinants.reference_fci_energy
        reference_kind = "fci"
    else:
        if full is None:
            full = exact_ground(matrix)
        reference = full.energy + shift
        reference_kind = "self-referential"
    q = 1
    while True:
        count = min(1 << q, dim)
        sub = principal_submatrix(matrix, ordering, count)
        achieved = exact_ground(sub).energy + shift
        if abs(achieved - reference) <= threshold or count == dim:
            return SelectionReport(
                ordering=ordering,
                chosen_q=q,
                chosen_count=count,
                achieved_energy=achieved,
                reference_energy=reference,
                reference_kind=reference_kind,
                threshold_met=abs(achieved - reference) <= threshold,
            )
        q += 1
