"""Layered Ry/CNOT circuit with circular entanglement.

Layer 0 is one Ry rotation per qubit; every further layer is a circular CNOT
chain (0->1, 1->2, ..., q-1->0) followed by another Ry per qubit, giving
q*(layers+1) parameters.  On two qubits the circular chain degenerates to a
single CNOT per layer (the second edge would immediately re-entangle the
same pair), and on one qubit no entangler is emitted at all.  Starting from
|0...0> the circuit keeps every amplitude real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector_engine import CnotGate, GateOp, RyGate, Statevector, apply_gate, init_zero

__all__ = [
    "AnsatzError",
    "AnsatzSpec",
    "build_circuit",
    "prepare_state",
    "default_layers",
    "LAYER_SCHEDULE",
]

# layer-count defaults keyed by register size; larger registers extrapolate
# linearly from the last two rows and are flagged unvalidated
LAYER_SCHEDULE = {1: 0, 2: 1, 3: 2, 4: 3, 5: 5, 6: 11, 7: 18}


class AnsatzError(ValueError):
    """Raised for inconsistent circuit shapes or parameter vectors."""


@dataclass(frozen=True)
class AnsatzSpec:
    qubit_count: int
    layers: int
    entanglement: str = "circular"

    def __post_init__(self):
        if self.qubit_count < 1:
            raise AnsatzError(f"qubit count {self.qubit_count} must be at least 1")
        if self.layers < 0:
            raise AnsatzError(f"layer count {self.layers} must be nonnegative")
        if self.entanglement != "circular":
            raise AnsatzError(f"unsupported entanglement {self.entanglement!r}")

    @property
    def parameter_count(self) -> int:
        return self.qubit_count * (self.layers + 1)


def default_layers(qubit_count: int) -> tuple[int, bool]:
    """Default layer count for a register, plus whether it is validated.

    Registers beyond the schedule table extrapolate linearly from its last
    two rows and report validated=False.
    """
    if qubit_count < 1:
        raise AnsatzError(f"qubit count {qubit_count} must be at least 1")
    if qubit_count in LAYER_SCHEDULE:
        return LAYER_SCHEDULE[qubit_count], True
    top = max(LAYER_SCHEDULE)
    slope = LAYER_SCHEDULE[top] - LAYER_SCHEDULE[top - 1]
    return LAYER_SCHEDULE[top] + slope * (qubit_count - top), False


def _entangler(qubit_count: int) -> list[GateOp]:
    if qubit_count == 1:
        return []
    if qubit_count == 2:
        return [CnotGate(0, 1)]
    return [CnotGate(n, (n + 1) % qubit_count) for n in range(qubit_count)]


def build_circuit(spec: AnsatzSpec, params) -> list[GateOp]:
    """Ordered gate list: Ry layer 0 (qubit 0 first), then per layer the
    circular CNOT chain followed by its Ry layer."""
    values = np.asarray(params, dtype=np.float64)
    if values.shape != (spec.parameter_count,):
        raise AnsatzError(
            f"parameter vector of length {values.shape} does not match "
            f"{spec.parameter_count} circuit parameters"
        )
    q = spec.qubit_count
    gates: list[GateOp] = [RyGate(float(values[n]), n) for n in range(q)]
    for layer in range(1, spec.layers + 1):
        gates.extend(_entangler(q))
        gates.extend(RyGate(float(values[layer * q + n]), n) for n in range(q))
    return gates


def prepare_state(spec: AnsatzSpec, params) -> Statevector:
    """Run the circuit on |0...0> and return the resulting state."""
    state = init_zero(spec.qubit_count)
    for gate in build_circuit(spec, params):
        apply_gate(state, gate)
    return state
