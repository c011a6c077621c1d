import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vqsci.matrix_model import (
    DeterminantSet,
    FixtureError,
    HermitianMatrix,
    MatrixFixture,
    load_fixture,
    principal_submatrix,
    save_fixture,
)

import oracles

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def _write(tmp_path, payload) -> Path:
    path = tmp_path / "fixture.json"
    path.write_text(json.dumps(payload))
    return path


def _minimal(dim, entries, storage="sparse", **extra):
    doc = {
        "version": 1,
        "dimension": dim,
        "storage": storage,
        "entries": entries,
        "determinant_labels": [f"d{i}" for i in range(dim)],
    }
    doc.update(extra)
    return doc


class TestLoadFixture:
    def test_committed_two_level_matrix(self):
        fixture = load_fixture(FIXTURES / "h2_golden.json")
        assert fixture.matrix.dimension == 2
        np.testing.assert_allclose(fixture.matrix.data, oracles.GOLDEN_ENTRIES)
        assert fixture.determinants.labels == ("20", "02")

    def test_sparse_quadruples_both_halves(self, tmp_path):
        entries = [
            [0, 0, -1.8266, 0],
            [0, 1, 0.1814, 0],
            [1, 0, 0.1814, 0],
            [1, 1, -0.2596, 0],
        ]
        fixture = load_fixture(_write(tmp_path, _minimal(2, entries)))
        np.testing.assert_allclose(fixture.matrix.data, oracles.GOLDEN_ENTRIES)

    def test_sparse_missing_half_is_mirrored(self, tmp_path):
        entries = [[0, 0, 1.0, 0], [1, 1, 2.0, 0], [0, 1, 0.25, -0.5]]
        fixture = load_fixture(_write(tmp_path, _minimal(2, entries)))
        assert fixture.matrix.entry(1, 0) == complex(0.25, 0.5)

    def test_single_entry_matrix(self, tmp_path):
        fixture = load_fixture(_write(tmp_path, _minimal(1, [[0, 0, 5.0, 0]])))
        assert fixture.matrix.dimension == 1
        assert fixture.matrix.entry(0, 0) == 5.0

    def test_hermiticity_violation_names_pair(self, tmp_path):
        entries = [[0, 0, 1.0, 0], [1, 1, 1.0, 0], [0, 1, 1.0, 0], [1, 0, 2.0, 0]]
        with pytest.raises(FixtureError, match=r"\(0, ?1\)|\(1, ?0\)"):
            load_fixture(_write(tmp_path, _minimal(2, entries)))

    def test_duplicate_sparse_pair_rejected(self, tmp_path):
        entries = [[0, 0, 1.0, 0], [0, 0, 1.0, 0]]
        with pytest.raises(FixtureError, match="duplicate"):
            load_fixture(_write(tmp_path, _minimal(1, entries)))

    def test_dense_entry_count_must_match(self, tmp_path):
        doc = _minimal(2, [[1.0, 0.0]] * 3, storage="dense")
        with pytest.raises(FixtureError):
            load_fixture(_write(tmp_path, doc))

    def test_unsupported_version(self, tmp_path):
        doc = _minimal(1, [[0, 0, 1.0, 0]])
        doc["version"] = 2
        with pytest.raises(FixtureError, match="version"):
            load_fixture(_write(tmp_path, doc))

    def test_label_count_must_match_dimension(self, tmp_path):
        doc = _minimal(2, [[0, 0, 1.0, 0], [1, 1, 2.0, 0]])
        doc["determinant_labels"] = ["only-one"]
        with pytest.raises(FixtureError, match="label"):
            load_fixture(_write(tmp_path, doc))

    def test_amplitude_norm_enforced(self, tmp_path):
        doc = _minimal(2, [[0, 0, 1.0, 0], [1, 1, 2.0, 0]], amplitudes=[1.0, 1.0])
        with pytest.raises(FixtureError, match="amplitude"):
            load_fixture(_write(tmp_path, doc))

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(FixtureError, match="JSON"):
            load_fixture(path)

    def test_diagonal_imaginary_part_rejected(self, tmp_path):
        doc = _minimal(1, [[0, 0, 1.0, 0.5]])
        with pytest.raises(FixtureError, match="diagonal"):
            load_fixture(_write(tmp_path, doc))


class TestSaveFixture:
    def test_round_trip_committed_fixture(self, tmp_path):
        fixture = load_fixture(FIXTURES / "h2_golden.json")
        out = tmp_path / "copy.json"
        save_fixture(fixture, out)
        again = load_fixture(out)
        assert np.array_equal(again.matrix.data, fixture.matrix.data)
        assert again.determinants == fixture.determinants
        assert again.provenance == fixture.provenance

    def test_round_trip_random_sparse(self, tmp_path):
        rng = np.random.default_rng(64)
        data = oracles.random_hermitian(rng, 64)
        amps = rng.standard_normal(64)
        amps /= np.linalg.norm(amps)
        fixture = MatrixFixture(
            HermitianMatrix(data, "sparse"),
            DeterminantSet(
                labels=tuple(f"c{i}" for i in range(64)),
                amplitudes=amps,
                n_electrons=4,
                n_spin_orbitals=12,
                nuclear_repulsion=1.25,
                reference_fci_energy=-7.5,
            ),
            {"seed": "64"},
        )
        out = tmp_path / "sparse.json"
        save_fixture(fixture, out)
        again = load_fixture(out)
        assert np.array_equal(again.matrix.data, data)
        assert np.array_equal(again.determinants.amplitudes, amps)
        assert again.determinants.nuclear_repulsion == 1.25
        assert again.determinants.reference_fci_energy == -7.5

    def test_unwritable_path_raises(self, tmp_path):
        fixture = load_fixture(FIXTURES / "h2_golden.json")
        with pytest.raises(OSError):
            save_fixture(fixture, tmp_path / "nosuchdir" / "x.json")

    @settings(max_examples=25, deadline=None)
    @given(dim=st.integers(min_value=1, max_value=12), seed=st.integers(0, 2**31))
    def test_round_trip_is_bit_exact(self, dim, seed, tmp_path_factory):
        rng = np.random.default_rng(seed)
        data = oracles.random_hermitian(rng, dim)
        fixture = MatrixFixture(
            HermitianMatrix(data),
            DeterminantSet(labels=tuple(str(i) for i in range(dim))),
            {},
        )
        out = tmp_path_factory.mktemp("rt") / "f.json"
        save_fixture(fixture, out)
        assert np.array_equal(load_fixture(out).matrix.data, data)


class TestHermitianMatrix:
    def test_copies_and_locks_input(self):
        source = np.array([[1.0, 2.0], [2.0, 3.0]], dtype=np.complex128)
        matrix = HermitianMatrix(source)
        source[0, 0] = 99.0
        assert matrix.entry(0, 0) == 1.0
        with pytest.raises(ValueError):
            matrix.data[0, 0] = 5.0

    def test_rejects_nonsquare(self):
        with pytest.raises(FixtureError):
            HermitianMatrix(np.zeros((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(FixtureError):
            HermitianMatrix(np.array([[0.0, 1.0], [2.0, 0.0]]))


class TestPrincipalSubmatrix:
    def test_identity_ordering_full_size(self):
        matrix = load_fixture(FIXTURES / "h2_golden.json").matrix
        sub = principal_submatrix(matrix, [0, 1], 2)
        assert np.array_equal(sub.data, matrix.data)

    def test_reorders_before_truncating(self):
        matrix = load_fixture(FIXTURES / "h2_golden.json").matrix
        sub = principal_submatrix(matrix, [1, 0], 1)
        assert sub.dimension == 1
        assert sub.entry(0, 0) == pytest.approx(-0.2596)

    def test_entry_mapping(self):
        rng = np.random.default_rng(5)
        data = oracles.random_hermitian(rng, 6)
        matrix = HermitianMatrix(data)
        order = [3, 1, 5, 0, 2, 4]
        sub = principal_submatrix(matrix, order, 4)
        for a in range(4):
            for b in range(4):
                assert sub.entry(a, b) == data[order[a], order[b]]

    def test_rejects_bad_permutation(self):
        matrix = load_fixture(FIXTURES / "h2_golden.json").matrix
        with pytest.raises(FixtureError):
            principal_submatrix(matrix, [0, 0], 2)

    def test_rejects_out_of_range_size(self):
        matrix = load_fixture(FIXTURES / "h2_golden.json").matrix
        with pytest.raises(FixtureError):
            principal_submatrix(matrix, [0, 1], 3)
        with pytest.raises(FixtureError):
            principal_submatrix(matrix, [0, 1], 0)
