"""Configuration-interaction matrix construction and diagonalization.

Matrix elements between determinants follow the two-spin-channel excitation
rules over spatial-orbital integrals (h, g) in chemist notation, with phases
computed per channel from the bits between hole and particle.  The dense
build screens candidate pairs with vectorized popcounts, so only connected
pairs reach the Python element dispatch.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from chemfix.determinants import Determinant, occupied_orbitals


class CiError(ValueError):
    pass


@dataclass(frozen=True)
class GroundState:
    electronic_energy: float
    amplitudes: np.ndarray


def _single_phase(mask: int, hole: int, particle: int) -> float:
    lo, hi = (hole, particle) if hole < particle else (particle, hole)
    between = mask & ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)
    return -1.0 if between.bit_count() & 1 else 1.0


def _holes_particles(ket_mask: int, bra_mask: int):
    holes = occupied_orbitals(ket_mask & ~bra_mask)
    particles = occupied_orbitals(bra_mask & ~ket_mask)
    return holes, particles


class _Elements:
    """Matrix-element evaluator bound to one (h, g) integral pair."""

    def __init__(self, h: np.ndarray, g: np.ndarray):
        self.h = h
        self.g = g
        # (ii|jj) and (ij|ji) tables make diagonal elements two lookups
        self.coulomb = np.einsum("iijj->ij", g)
        self.exchange = np.einsum("ijji->ij", g)

    def diagonal(self, det: Determinant) -> float:
        oa = occupied_orbitals(det.alpha)
        ob = occupied_orbitals(det.beta)
        h = self.h
        value = float(h[oa, oa].sum() + h[ob, ob].sum())
        jaa = self.coulomb[np.ix_(oa, oa)]
        kaa = self.exchange[np.ix_(oa, oa)]
        jbb = self.coulomb[np.ix_(ob, ob)]
        kbb = self.exchange[np.ix_(ob, ob)]
        value += 0.5 * float((jaa - kaa).sum() + (jbb - kbb).sum())
        value += float(self.coulomb[np.ix_(oa, ob)].sum())
        return value

    def _single(self, mask: int, other_occ, hole: int, particle: int) -> float:
        common = occupied_orbitals(mask & ~(1 << hole))
        direct = np.diagonal(self.g[hole, particle])
        cross = np.diagonal(self.g[hole, :, :, particle])
        value = float(self.h[hole, particle])
        value += float(direct[common].sum() - cross[common].sum())
        value += float(direct[other_occ].sum())
        return _single_phase(mask, hole, particle) * value

    def _double_same(self, mask: int, holes, particles) -> float:
        (i, j), (a, b) = holes, particles
        intermediate = (mask & ~(1 << i)) | (1 << a)
        phase = _single_phase(mask, i, a) * _single_phase(intermediate, j, b)
        g = self.g
        return phase * float(g[i, a, j, b] - g[i, b, j, a])

    def element(self, ket: Determinant, bra: Determinant) -> float:
        da = (ket.alpha ^ bra.alpha).bit_count()
        db = (ket.beta ^ bra.beta).bit_count()
        if da + db > 4:
            return 0.0
        if da == 0 and db == 0:
            return self.diagonal(ket)
        if da == 2 and db == 0:
            (hole,), (particle,) = _holes_particles(ket.alpha, bra.alpha)
            return self._single(ket.alpha, occupied_orbitals(ket.beta), hole, particle)
        if da == 0 and db == 2:
            (hole,), (particle,) = _holes_particles(ket.beta, bra.beta)
            return self._single(ket.beta, occupied_orbitals(ket.alpha), hole, particle)
        if da == 4 and db == 0:
            holes, particles = _holes_particles(ket.alpha, bra.alpha)
            return self._double_same(ket.alpha, holes, particles)
        if da == 0 and db == 4:
            holes, particles = _holes_particles(ket.beta, bra.beta)
            return self._double_same(ket.beta, holes, particles)
        if da == 2 and db == 2:
            (ha,), (pa,) = _holes_particles(ket.alpha, bra.alpha)
            (hb,), (pb,) = _holes_particles(ket.beta, bra.beta)
            phase = _single_phase(ket.alpha, ha, pa) * _single_phase(ket.beta, hb, pb)
            return phase * float(self.g[ha, pa, hb, pb])
        return 0.0


def matrix_element(ket: Determinant, bra: Determinant, h: np.ndarray, g: np.ndarray) -> float:
    return _Elements(h, g).element(ket, bra)


def ci_matrix(dets: list[Determinant], h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Dense symmetric CI matrix over the determinant list, in list order."""
    if not dets:
        raise CiError("determinant list is empty")
    if len(set(dets)) != len(dets):
        raise CiError("determinant list contains duplicates")
    dim = len(dets)
    alpha = np.array([d.alpha for d in dets], dtype=np.uint64)
    beta = np.array([d.beta for d in dets], dtype=np.uint64)
    elements = _Elements(h, g)
    out = np.zeros((dim, dim))
    for row in range(dim):
        diff = np.bitwise_count(alpha[row:] ^ alpha[row]) + np.bitwise_count(
            beta[row:] ^ beta[row]
        )
        for offset in np.nonzero(diff <= 4)[0]:
            col = row + int(offset)
            value = elements.element(dets[row], dets[col])
            out[row, col] = value
            out[col, row] = value
    return out


def solve_ground(dets: list[Determinant], h: np.ndarray, g: np.ndarray) -> GroundState:
    """Lowest eigenpair of the CI matrix; amplitude sign fixed by entry 0."""
    matrix = ci_matrix(dets, h, g)
    values, vectors = eigh(matrix, subset_by_index=[0, 0])
    amplitudes = vectors[:, 0]
    anchor = amplitudes[int(np.argmax(np.abs(amplitudes)))] if abs(amplitudes[0]) < 1e-12 else amplitudes[0]
    if anchor < 0:
        amplitudes = -amplitudes
    return GroundState(electronic_energy=float(values[0]), amplitudes=amplitudes)
