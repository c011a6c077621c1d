"""Spin-restricted determinant bookkeeping over spatial orbitals.

A determinant is a pair of bitmasks (alpha, beta); bit m set means spatial
orbital m holds an electron of that spin.  Creation operators are ordered by
ascending spin-orbital index with the whole alpha block before the beta
block, so excitation phases factorize per spin channel.
"""

from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True, order=True)
class Determinant:
    alpha: int
    beta: int


def mask_of(orbitals) -> int:
    mask = 0
    for orb in orbitals:
        mask |= 1 << orb
    return mask


def occupied_orbitals(mask: int) -> list[int]:
    out = []
    orb = 0
    while mask:
        if mask & 1:
            out.append(orb)
        mask >>= 1
        orb += 1
    return out


def label(det: Determinant, n_orbitals: int) -> str:
    """Occupation string, orbital 0 leftmost: '2' paired, 'a'/'b' single, '0' empty."""
    chars = []
    for orb in range(n_orbitals):
        bit = 1 << orb
        has_alpha = bool(det.alpha & bit)
        has_beta = bool(det.beta & bit)
        if has_alpha and has_beta:
            chars.append("2")
        elif has_alpha:
            chars.append("a")
        elif has_beta:
            chars.append("b")
        else:
            chars.append("0")
    return "".join(chars)


def hartree_fock_determinant(n_orbitals: int, n_alpha: int, n_beta: int) -> Determinant:
    return Determinant(mask_of(range(n_alpha)), mask_of(range(n_beta)))


def fci_space(n_orbitals: int, n_alpha: int, n_beta: int) -> list[Determinant]:
    """Every spin-restricted configuration, alpha-string major, ascending."""
    alpha_masks = [mask_of(c) for c in combinations(range(n_orbitals), n_alpha)]
    beta_masks = [mask_of(c) for c in combinations(range(n_orbitals), n_beta)]
    return [Determinant(a, b) for a in alpha_masks for b in beta_masks]


def excitation_degree(d1: Determinant, d2: Determinant) -> int:
    return ((d1.alpha ^ d2.alpha).bit_count() + (d1.beta ^ d2.beta).bit_count()) // 2


def cisd_space(n_orbitals: int, n_alpha: int, n_beta: int) -> list[Determinant]:
    """Reference plus all determinants within two excitations of it.

    The reference comes first; the rest follow in a fixed deterministic
    order.  For two-row molecules this is the largest CI space that stays
    classically cheap while still ranking the dominant configurations.
    """
    reference = hartree_fock_determinant(n_orbitals, n_alpha, n_beta)
    space = [reference]
    seen = {reference}

    def singles(mask: int) -> list[int]:
        occupied = occupied_orbitals(mask)
        empty = [o for o in range(n_orbitals) if not (mask >> o) & 1]
        return [mask ^ (1 << i) | (1 << a) for i in occupied for a in empty]

    alpha_singles = singles(reference.alpha)
    beta_singles = singles(reference.beta)

    def add(det: Determinant):
        if det not in seen:
            seen.add(det)
            space.append(det)

    for a in alpha_singles:
        add(Determinant(a, reference.beta))
    for b in beta_singles:
        add(Determinant(reference.alpha, b))
    for a in alpha_singles:
        for deeper in singles(a):
            if excitation_degree(Determinant(deeper, 0), Determinant(reference.alpha, 0)) == 2:
                add(Determinant(deeper, reference.beta))
    for b in beta_singles:
        for deeper in singles(b):
            if excitation_degree(Determinant(deeper, 0), Determinant(reference.beta, 0)) == 2:
                add(Determinant(reference.alpha, deeper))
    for a in alpha_singles:
        for b in beta_singles:
            add(Determinant(a, b))
    return space
