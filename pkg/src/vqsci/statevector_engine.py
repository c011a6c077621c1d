"""Pure-state register simulation: Ry and CNOT gates, exact Pauli expectations.

Amplitudes are stored as a complex vector of length 2**q indexed by the
package bit convention (qubit j carries bit weight 2**j).  Gates mutate the
state in place and return it; expectation values act per Pauli string on
index permutations and sign masks rather than dense operator matrices, so a
term costs O(2**q) instead of O(4**q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .pauli_encoding import PauliSum, axes_to_masks

__all__ = [
    "EngineError",
    "Statevector",
    "RyGate",
    "CnotGate",
    "GateOp",
    "init_zero",
    "apply_gate",
    "exact_expectation",
]

MAX_QUBITS = 24
_IMAG_TOL = 1e-10


class EngineError(ValueError):
    """Raised for register-size guards and malformed gate indices."""


@dataclass
class Statevector:
    amplitudes: np.ndarray
    qubit_count: int

    def __post_init__(self):
        if not isinstance(self.qubit_count, (int, np.integer)) or not (
            1 <= self.qubit_count <= MAX_QUBITS
        ):
            raise EngineError(
                f"qubit count {self.qubit_count!r} outside supported range 1..{MAX_QUBITS}"
            )
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.qubit_count,):
            raise EngineError(
                f"amplitude vector of shape {amps.shape} does not span "
                f"{self.qubit_count} qubits"
            )
        self.amplitudes = amps

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy(), self.qubit_count)


@dataclass(frozen=True)
class RyGate:
    angle: float
    target: int


@dataclass(frozen=True)
class CnotGate:
    control: int
    target: int


GateOp = Union[RyGate, CnotGate]


def init_zero(qubit_count: int) -> Statevector:
    """State |0...0>: amplitude 1 at index 0."""
    if not isinstance(qubit_count, (int, np.integer)) or not 1 <= qubit_count <= MAX_QUBITS:
        raise EngineError(f"qubit count {qubit_count!r} outside supported range 1..{MAX_QUBITS}")
    amps = np.zeros(1 << qubit_count, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(amps, int(qubit_count))


def _check_qubit(q: int, index: int, what: str) -> None:
    if not 0 <= index < q:
        raise EngineError(f"{what} qubit {index} outside register of {q} qubits")


def _apply_ry(state: Statevector, angle: float, target: int) -> None:
    half = 0.5 * angle
    c, s = math.cos(half), math.sin(half)
    view = state.amplitudes.reshape(-1, 2, 1 << target)
    lo = view[:, 0, :].copy()
    hi = view[:, 1, :]
    view[:, 0, :] = c * lo - s * hi
    view[:, 1, :] = s * lo + c * hi


def apply_single_qubit(state: Statevector, target: int, matrix: np.ndarray) -> Statevector:
    """Apply an arbitrary 2x2 operator to one qubit (measurement-basis use)."""
    _check_qubit(state.qubit_count, target, "target")
    view = state.amplitudes.reshape(-1, 2, 1 << target)
    lo = view[:, 0, :].copy()
    hi = view[:, 1, :]
    view[:, 0, :] = matrix[0, 0] * lo + matrix[0, 1] * hi
    view[:, 1, :] = matrix[1, 0] * lo + matrix[1, 1] * hi
    return state


def _apply_cnot(state: Statevector, control: int, target: int) -> None:
    q = state.qubit_count
    # amplitudes viewed as a rank-q tensor: axis (q-1-j) carries qubit j
    tensor = state.amplitudes.reshape((2,) * q)
    ax_c, ax_t = q - 1 - control, q - 1 - target
    sel0: list = [slice(None)] * q
    sel1: list = [slice(None)] * q
    sel0[ax_c] = 1
    sel1[ax_c] = 1
    sel0[ax_t] = 0
    sel1[ax_t] = 1
    tmp = tensor[tuple(sel0)].copy()
    tensor[tuple(sel0)] = tensor[tuple(sel1)]
    tensor[tuple(sel1)] = tmp


def apply_gate(state: Statevector, gate: GateOp) -> Statevector:
    """Apply one gate in place and return the state.

    Ry acts as [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]] on the target
    bit plane; CNOT swaps the target bit where the control bit is set.  Both
    preserve the norm and keep real amplitudes real.
    """
    q = state.qubit_count
    if isinstance(gate, RyGate):
        _check_qubit(q, gate.target, "target")
        _apply_ry(state, gate.angle, gate.target)
    elif isinstance(gate, CnotGate):
        _check_qubit(q, gate.control, "control")
        _check_qubit(q, gate.target, "target")
        if gate.control == gate.target:
            raise EngineError("CNOT control and target must differ")
        _apply_cnot(state, gate.control, gate.target)
    else:
        raise EngineError(f"unknown gate {gate!r}")
    return state


_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(q: int) -> np.ndarray:
    got = _INDEX_CACHE.get(q)
    if got is None:
        got = np.arange(1 << q, dtype=np.int64)
        _INDEX_CACHE[q] = got
    return got


def _term_expectation(amps: np.ndarray, q: int, axes: str) -> complex:
    mx, my, mz = axes_to_masks(axes)
    flip = mx | my
    signed = mz | my
    idx = _indices(q)
    phase = (1.0, 1.0j, -1.0, -1.0j)[bin(my).count("1") & 3]
    if flip == 0 and signed == 0:
        return complex(np.vdot(amps, amps))
    signs = 1 - 2 * (np.bitwise_count((idx & signed).astype(np.uint64)).astype(np.int64) & 1)
    return phase * complex(np.sum(np.conj(amps[idx ^ flip]) * signs * amps))


def exact_expectation(state: Statevector, pauli_sum: PauliSum) -> float:
    """<psi| operator |psi> summed over all terms, asserted real.

    Raises on register mismatch or when the accumulated imaginary residue is
    not negligible (Hermitian inputs always pass).
    """
    if state.qubit_count != pauli_sum.qubit_count:
        raise EngineError(
            f"state spans {state.qubit_count} qubits but operator spans "
            f"{pauli_sum.qubit_count}"
        )
    total = 0j
    amps = state.amplitudes
    for term in pauli_sum.terms:
        total += term.coefficient * _term_expectation(amps, state.qubit_count, term.axes)
    scale = max(1.0, abs(total.real))
    if abs(total.imag) > _IMAG_TOL * scale:
        raise EngineError(f"expectation {total!r} has a non-negligible imaginary part")
    return float(total.real)
