"""Determinant enumeration and labelling."""

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chemfix.determinants import (
    Determinant,
    cisd_space,
    excitation_degree,
    fci_space,
    hartree_fock_determinant,
    label,
    mask_of,
    occupied_orbitals,
)

occupation_sets = st.sets(st.integers(0, 12), max_size=8)


class TestMasks:
    @settings(max_examples=100, deadline=None)
    @given(occupation_sets)
    def test_round_trip(self, orbitals):
        assert set(occupied_orbitals(mask_of(sorted(orbitals)))) == orbitals

    def test_label_characters(self):
        det = Determinant(alpha=mask_of([0, 1]), beta=mask_of([0, 2]))
        assert label(det, 4) == "2ab0"

    def test_hartree_fock_fills_lowest(self):
        det = hartree_fock_determinant(4, 2, 1)
        assert label(det, 4) == "2a00"


class TestFciSpace:
    def test_two_orbital_singlet_order(self):
        labels = [label(det, 2) for det in fci_space(2, 1, 1)]
        assert labels == ["20", "ab", "ba", "02"]

    @pytest.mark.parametrize(
        "n_orb, n_alpha, n_beta",
        [(4, 2, 2), (6, 2, 2), (7, 3, 3), (7, 5, 5), (8, 5, 5)],
    )
    def test_counts(self, n_orb, n_alpha, n_beta):
        space = fci_space(n_orb, n_alpha, n_beta)
        assert len(space) == comb(n_orb, n_alpha) * comb(n_orb, n_beta)
        assert len(set(space)) == len(space)

    def test_contains_reference(self):
        reference = hartree_fock_determinant(6, 2, 2)
        assert reference in fci_space(6, 2, 2)


class TestCisdSpace:
    def test_reference_comes_first(self):
        space = cisd_space(6, 2, 2)
        assert space[0] == hartree_fock_determinant(6, 2, 2)

    def test_small_space_is_fci_subset(self):
        cisd = cisd_space(4, 2, 2)
        fci = fci_space(4, 2, 2)
        assert len(cisd) == 27
        assert set(cisd) <= set(fci)

    def test_ethylene_sized_space(self):
        # 16 electrons in 14 orbitals: 1 + 96 singles + 3144 doubles
        space = cisd_space(14, 8, 8)
        assert len(space) == 3241
        assert len(set(space)) == 3241
        reference = space[0]
        histogram = {0: 0, 1: 0, 2: 0}
        for det in space:
            histogram[excitation_degree(reference, det)] += 1
        assert histogram == {0: 1, 1: 96, 2: 3144}

    def test_degrees_capped_at_two(self):
        reference = hartree_fock_determinant(4, 2, 2)
        for det in cisd_space(4, 2, 2):
            assert excitation_degree(reference, det) <= 2


class TestExcitationDegree:
    def test_zero_iff_equal(self):
        space = fci_space(4, 2, 2)
        for det in space:
            assert excitation_degree(det, det) == 0
        assert excitation_degree(space[0], space[1]) > 0

    def test_symmetric(self):
        space = fci_space(4, 2, 2)
        for ket in space[:6]:
            for bra in space[:6]:
                assert excitation_degree(ket, bra) == excitation_degree(bra, ket)
