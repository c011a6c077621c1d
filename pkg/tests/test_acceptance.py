"""End-to-end behavior checks for the full solver pipeline.

Each test states its numeric tolerance and wall-clock budget inline.  The
molecular fixtures under fixtures/ are committed artifacts; regenerating
them requires the ingest package but running these tests does not.
"""

import time
from pathlib import Path

import numpy as np
import pytest

from vqsci.classical_oracle import exact_ground, rank_configurations
from vqsci.matrix_model import HermitianMatrix, load_fixture, principal_submatrix
from vqsci.measurement import ReadoutNoise, ShotPlan, build_calibration, sampled_energy
from vqsci.pauli_encoding import (
    BitEncoding,
    combine_terms,
    encode_matrix,
    entry_scale,
    reconstruct_dense,
    required_qubits,
    stream_entry_terms,
)
from vqsci.resource_analysis import qubit_table, slater_condon_sparsity_bound
from vqsci.statevector_engine import Statevector, exact_expectation
from vqsci.vqsci_driver import RunConfig, convergence_study, run

import oracles

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = str(FIXTURES / "h2_golden.json")
WATER = str(FIXTURES / "h2o_sto3g.json")
AMMONIA = str(FIXTURES / "nh3_sto3g.json")

CHEMICAL_ACCURACY = 0.0016


class _Stopwatch:
    def __init__(self, budget_seconds):
        self.budget = budget_seconds

    def __enter__(self):
        self.started = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.started
        if exc == (None, None, None):
            assert self.elapsed < self.budget, (
                f"finished in {self.elapsed:.1f}s, budget {self.budget}s"
            )
        return False


def _ordering(fixture):
    if fixture.determinants.amplitudes is not None:
        return rank_configurations(fixture.determinants.amplitudes)
    return rank_configurations(exact_ground(fixture.matrix).eigenvector)


def _nested_ground_energies(matrix, ordering):
    dim = matrix.dimension
    counts = [c for c in (1 << k for k in range(dim.bit_length())) if c < dim]
    counts.append(dim)
    energies = []
    for count in counts:
        sub = principal_submatrix(matrix, ordering, count)
        energies.append(exact_ground(sub).energy)
    return energies


def test_hydrogen_pair_matrix_pauli_coefficients():
    # published single-qubit decomposition, reproduced to 1e-4
    with _Stopwatch(1.0):
        fixture = load_fixture(GOLDEN)
        pauli_sum = encode_matrix(fixture.matrix, BitEncoding(1))
        coefficients = {term.axes: term.coefficient for term in pauli_sum.terms}
    assert coefficients["I"].real == pytest.approx(-1.0431, abs=1e-4)
    assert coefficients["Z"].real == pytest.approx(-0.7835, abs=1e-4)
    assert coefficients["X"].real == pytest.approx(0.1814, abs=1e-4)
    assert all(term.coefficient.imag == 0.0 for term in pauli_sum.terms)


def test_hydrogen_exact_single_qubit_groundstate():
    # tail mean within 1e-6 Ha of the closed-form 2x2 minimal eigenvalue
    with _Stopwatch(1.0):
        result = run(RunConfig(fixture_path=GOLDEN, mode="exact", qubits=1, layers=0))
    assert result.tail_mean == pytest.approx(oracles.GOLDEN_GROUND_ENERGY, abs=1e-6)
    assert result.trace.iterations_used <= 50


def test_hydrogen_sampled_chemical_accuracy_rate():
    # 20 seeds at 20,000 shots per string; >= 18 must land within 0.0016 Ha
    with _Stopwatch(60.0):
        passes = 0
        for seed in range(20):
            result = run(
                RunConfig(
                    fixture_path=GOLDEN,
                    mode="sampled",
                    qubits=1,
                    layers=0,
                    shot_plan=ShotPlan(20_000, seed),
                )
            )
            if result.delta_sci <= CHEMICAL_ACCURACY:
                passes += 1
    assert passes >= 18, f"only {passes}/20 seeds within chemical accuracy"


def test_readout_mitigation_bias_reduction():
    # calibration correction must shrink the energy bias at least fivefold
    with _Stopwatch(60.0):
        fixture = load_fixture(GOLDEN)
        pauli_sum = encode_matrix(fixture.matrix, BitEncoding(1))
        ground = exact_ground(fixture.matrix)
        state = Statevector(ground.eigenvector.astype(np.complex128), 1)
        exact_energy = exact_expectation(state, pauli_sum)
        noise = ReadoutNoise(0.02, 0.02)
        calibration = build_calibration(noise, 1)
        plan = ShotPlan(100_000, 42)
        raw, _ = sampled_energy(pauli_sum, state, plan, noise, None)
        fixed, _ = sampled_energy(pauli_sum, state, plan, noise, calibration)
    raw_bias = abs(raw - exact_energy)
    fixed_bias = abs(fixed - exact_energy)
    assert raw_bias >= 5.0 * fixed_bias, (
        f"bias {raw_bias:.2e} -> {fixed_bias:.2e}, below 5x reduction"
    )


def test_random_matrix_encode_reconstruct_roundtrip():
    # 200 seeded Hermitian matrices, D in 2..64: entrywise error < 1e-10 and
    # streamed per-entry accumulation identical to the batched encoder
    with _Stopwatch(60.0):
        rng = np.random.default_rng(2024)
        for case in range(200):
            dim = int(rng.integers(2, 65))
            data = oracles.random_hermitian(rng, dim, complex_entries=bool(case % 2))
            matrix = HermitianMatrix(data)
            qubits = required_qubits(dim)
            encoding = BitEncoding(qubits)
            batch = encode_matrix(matrix, encoding, padding="extend")
            rebuilt = reconstruct_dense(batch)
            assert np.max(np.abs(rebuilt[:dim, :dim] - data)) < 1e-10
            streamed = combine_terms(
                stream_entry_terms(matrix, encoding, padding="extend"),
                qubits,
                entry_scale(matrix, encoding, padding="extend"),
            )
            assert streamed == batch


def test_subset_ground_energy_interlacing():
    # nested amplitude-ranked subsets: ground energy never increases with
    # size and never dips below the full-matrix ground energy
    with _Stopwatch(60.0):
        rng = np.random.default_rng(7)
        cases = []
        for _ in range(50):
            dim = int(rng.integers(2, 257))
            random_matrix = HermitianMatrix(
                oracles.random_hermitian(rng, dim, complex_entries=False)
            )
            cases.append((random_matrix, None))
        fixture_paths = sorted(FIXTURES.glob("*.json"))
        assert fixture_paths, "no committed fixtures found"
        for path in fixture_paths:
            fixture = load_fixture(path)
            cases.append((fixture.matrix, _ordering(fixture)))
        for matrix, ordering in cases:
            if ordering is None:
                ordering = rank_configurations(exact_ground(matrix).eigenvector)
            energies = _nested_ground_energies(matrix, ordering)
            for bigger, smaller in zip(energies[1:], energies[:-1]):
                assert bigger <= smaller + 1e-10
            assert all(e >= energies[-1] - 1e-10 for e in energies)


def test_resource_planning_table_values():
    with _Stopwatch(1.0):
        table = {name: profile for name, profile in qubit_table()}
    expected = {
        "H2": (4, 4, 2, 1),
        "LiH": (225, 12, 8, 3),
        "BeH2": (1225, 14, 11, 4),
        "H2O": (441, 14, 9, 5),
        "NH3": (3136, 16, 12, 6),
        "C2H4": (9018009, 28, 24, 12),
    }
    assert set(table) == set(expected)
    for name, (d_full, q_vqe, q_fci, q_sci) in expected.items():
        profile = table[name]
        assert profile.d_fci == d_full, name
        assert profile.q_vqe == q_vqe, name
        assert profile.q_fci == q_fci, name
        assert profile.q_sci == q_sci, name
    assert slater_condon_sparsity_bound(10, 14) == 311


def _crossing_study(fixture_path, q_values, budget_seconds):
    fixture = load_fixture(fixture_path)
    reference = fixture.determinants.reference_fci_energy
    assert reference is not None
    with _Stopwatch(budget_seconds):
        rows = convergence_study(
            fixture_path, q_values, RunConfig(mode="exact")
        )
    return fixture, reference, rows


def _assert_crossing(rows, reference, crossing_count):
    for row in rows:
        # tail of the variational trace must sit on the subset diagonalization
        assert abs(row["tail_mean_hartree"] - row["energy_sci_exact_hartree"]) <= 1e-4
        subset_error = abs(row["energy_sci_exact_hartree"] - reference)
        if row["determinant_count"] < crossing_count:
            assert subset_error > CHEMICAL_ACCURACY, (
                f"{row['determinant_count']} determinants already accurate"
            )
        elif row["determinant_count"] == crossing_count:
            assert subset_error <= CHEMICAL_ACCURACY, (
                f"{crossing_count} determinants still off by {subset_error:.2e}"
            )


def test_water_reaches_chemical_accuracy_at_32_determinants():
    _, reference, rows = _crossing_study(WATER, [1, 2, 3, 4, 5], 1800.0)
    assert [row["determinant_count"] for row in rows] == [2, 4, 8, 16, 32]
    _assert_crossing(rows, reference, 32)


def test_ammonia_reaches_chemical_accuracy_at_64_determinants():
    """Known failure: at this geometry the crossing lands at 128, not 64.

    The subset error at 64 determinants is 5.8e-3 Ha, 3.6x chemical
    accuracy.  The stated count is kept so the gap stays visible instead
    of being widened away.
    """
    _, reference, rows = _crossing_study(AMMONIA, [1, 2, 3, 4, 5, 6], 1800.0)
    assert [row["determinant_count"] for row in rows] == [2, 4, 8, 16, 32, 64]
    _assert_crossing(rows, reference, 64)


def test_lithium_hydride_sampled_error_grows_with_bond_length():
    # fixed 8-determinant truncation, fixed shot budget: the gap to the full
    # configuration-interaction reference widens as the bond stretches.  The
    # growth is qualitative, not pointwise: stretched geometries err more
    # than near-equilibrium ones, without demanding a monotone curve
    paths = sorted(FIXTURES.glob("lih_*.json"))
    assert len(paths) >= 4, "lithium hydride fixture set missing"
    with _Stopwatch(600.0):
        deltas = []
        for path in paths:
            fixture = load_fixture(path)
            distance = float(fixture.provenance["bond_length_angstrom"])
            reference = fixture.determinants.reference_fci_energy
            assert reference is not None
            result = run(
                RunConfig(
                    fixture_path=str(path),
                    mode="sampled",
                    qubits=3,
                    shot_plan=ShotPlan(20_000, 5),
                )
            )
            deltas.append((distance, abs(result.tail_mean - reference)))
        deltas.sort()
    errors = [e for _, e in deltas]
    half = len(errors) // 2
    near, far = errors[:half], errors[-half:]
    assert errors[-1] > errors[0], (
        f"longest bond not worse than shortest: {deltas}"
    )
    assert sum(far) / len(far) > sum(near) / len(near), (
        f"stretched-half mean does not exceed equilibrium-half mean: {deltas}"
    )
