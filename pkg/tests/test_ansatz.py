import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vqsci.ansatz import (
    LAYER_SCHEDULE,
    AnsatzError,
    AnsatzSpec,
    build_circuit,
    default_layers,
    prepare_state,
)
from vqsci.statevector_engine import CnotGate, RyGate

import oracles


class TestAnsatzSpec:
    @pytest.mark.parametrize(
        "qubits,layers,expected",
        [(1, 0, 1), (2, 1, 4), (5, 5, 30), (6, 11, 72), (7, 18, 133)],
    )
    def test_parameter_count(self, qubits, layers, expected):
        assert AnsatzSpec(qubits, layers).parameter_count == expected

    def test_rejects_bad_shapes(self):
        with pytest.raises(AnsatzError):
            AnsatzSpec(0, 1)
        with pytest.raises(AnsatzError):
            AnsatzSpec(2, -1)
        with pytest.raises(AnsatzError):
            AnsatzSpec(2, 1, entanglement="all-to-all")


class TestDefaultLayers:
    def test_schedule_table(self):
        assert LAYER_SCHEDULE == {1: 0, 2: 1, 3: 2, 4: 3, 5: 5, 6: 11, 7: 18}
        for qubits, layers in LAYER_SCHEDULE.items():
            assert default_layers(qubits) == (layers, True)

    def test_extrapolation_is_flagged_unvalidated(self):
        layers8, validated8 = default_layers(8)
        layers9, validated9 = default_layers(9)
        assert (layers8, validated8) == (25, False)
        assert (layers9, validated9) == (32, False)


class TestBuildCircuit:
    def test_single_qubit_no_layers(self):
        gates = build_circuit(AnsatzSpec(1, 0), [0.4])
        assert gates == [RyGate(0.4, 0)]

    def test_two_qubit_single_layer_structure(self):
        gates = build_circuit(AnsatzSpec(2, 1), [0.1, 0.2, 0.3, 0.4])
        assert gates == [
            RyGate(0.1, 0),
            RyGate(0.2, 1),
            CnotGate(0, 1),
            RyGate(0.3, 0),
            RyGate(0.4, 1),
        ]

    def test_three_qubit_entangler_is_circular(self):
        gates = build_circuit(AnsatzSpec(3, 1), np.zeros(6))
        cnots = [g for g in gates if isinstance(g, CnotGate)]
        assert cnots == [CnotGate(0, 1), CnotGate(1, 2), CnotGate(2, 0)]

    def test_parameter_count_enforced(self):
        with pytest.raises(AnsatzError):
            build_circuit(AnsatzSpec(2, 1), [0.1, 0.2])


class TestPrepareState:
    def test_zero_parameters_give_hartree_fock_start(self):
        state = prepare_state(AnsatzSpec(3, 2), np.zeros(9))
        assert state.amplitudes[0] == 1.0
        assert np.count_nonzero(state.amplitudes) == 1

    def test_single_qubit_rotation(self):
        state = prepare_state(AnsatzSpec(1, 0), [0.8])
        assert state.amplitudes[0] == pytest.approx(math.cos(0.4))
        assert state.amplitudes[1] == pytest.approx(math.sin(0.4))

    def test_real_amplitudes_always(self):
        rng = np.random.default_rng(10)
        spec = AnsatzSpec(3, 2)
        params = rng.uniform(-math.pi, math.pi, spec.parameter_count)
        state = prepare_state(spec, params)
        assert np.max(np.abs(state.amplitudes.imag)) == 0.0

    def test_matches_dense_gate_oracle(self):
        rng = np.random.default_rng(11)
        spec = AnsatzSpec(3, 1)
        params = rng.uniform(-math.pi, math.pi, spec.parameter_count)
        vector = np.zeros(8, dtype=np.complex128)
        vector[0] = 1.0
        for gate in build_circuit(spec, params):
            if isinstance(gate, RyGate):
                full = oracles.gate_on_register(oracles.ry_matrix(gate.angle), gate.target, 3)
            else:
                full = oracles.cnot_on_register(gate.control, gate.target, 3)
            vector = full @ vector
        state = prepare_state(spec, params)
        np.testing.assert_allclose(state.amplitudes, vector, atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(qubits=st.integers(1, 4), layers=st.integers(0, 3), seed=st.integers(0, 2**31))
    def test_norm_preserved(self, qubits, layers, seed):
        rng = np.random.default_rng(seed)
        spec = AnsatzSpec(qubits, layers)
        params = rng.uniform(-math.pi, math.pi, spec.parameter_count)
        state = prepare_state(spec, params)
        assert state.norm_squared() == pytest.approx(1.0, abs=1e-12)

    def test_two_level_ansatz_reaches_any_real_pair(self):
        # one Ry on one qubit spans every normalized real two-component state
        angle = 2.0 * math.atan2(-0.11351304340894013, 0.993536506111396)
        state = prepare_state(AnsatzSpec(1, 0), [angle])
        energy = oracles.expectation(state.amplitudes, oracles.GOLDEN_ENTRIES).real
        assert energy == pytest.approx(oracles.GOLDEN_GROUND_ENERGY, abs=1e-12)
