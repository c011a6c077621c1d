"""Shot-based Pauli estimation with readout noise and calibration mitigation.

Sampling is simulated by computing the exact outcome distribution of the
rotated state, pushing it through per-qubit confusion factors when noise is
requested, and drawing one multinomial sample over all 2**q outcomes per
Pauli string.  Each string owns an RNG stream derived from (seed, string
index), so estimates do not depend on evaluation order.  Mitigation solves
the calibration system by least squares with a nonnegativity projection and
renormalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .pauli_encoding import PauliSum
from .statevector_engine import Statevector, apply_single_qubit

__all__ = [
    "MeasurementError",
    "ShotPlan",
    "ReadoutNoise",
    "CalibrationMatrix",
    "measure_pauli",
    "sampled_energy",
    "build_calibration",
    "mitigate_counts",
]

MAX_CALIBRATION_QUBITS = 12
_COLUMN_SUM_TOL = 1e-9
_CONDITION_LIMIT = 1e8

_SQRT_HALF = 1.0 / math.sqrt(2.0)
# Z-basis rotations: X-measurement via the Hadamard-equivalent, Y via the
# composed 2x2 taking the Y eigenbasis to the computational basis
_ROTATE_X = np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=np.complex128)
_ROTATE_Y = np.array([[_SQRT_HALF, -1j * _SQRT_HALF], [_SQRT_HALF, 1j * _SQRT_HALF]], dtype=np.complex128)


class MeasurementError(ValueError):
    """Raised for malformed plans, noise rates, or calibration matrices."""


@dataclass(frozen=True)
class ShotPlan:
    """Shots per Pauli string plus the RNG entropy prefix for this run."""

    shots_per_string: int
    rng_seed: int | tuple[int, ...] = 0

    def __post_init__(self):
        if self.shots_per_string < 1:
            raise MeasurementError(f"shots_per_string {self.shots_per_string} must be >= 1")

    def entropy(self) -> tuple[int, ...]:
        seed = self.rng_seed
        return tuple(seed) if isinstance(seed, tuple) else (int(seed),)


@dataclass(frozen=True)
class ReadoutNoise:
    """Per-qubit bit-flip rates: p01 reads 1 given true 0, p10 reads 0 given 1.

    Scalars apply uniformly; tuples give one rate per qubit.
    """

    p01: float | tuple[float, ...]
    p10: float | tuple[float, ...]

    def __post_init__(self):
        for name, value in (("p01", self.p01), ("p10", self.p10)):
            rates = value if isinstance(value, tuple) else (value,)
            for r in rates:
                if not 0.0 <= r < 0.5:
                    raise MeasurementError(f"{name} rate {r} outside [0, 0.5)")

    def rates_for(self, qubit_count: int) -> tuple[np.ndarray, np.ndarray]:
        def expand(value) -> np.ndarray:
            if isinstance(value, tuple):
                if len(value) != qubit_count:
                    raise MeasurementError(
                        f"{len(value)} per-qubit rates for {qubit_count} qubits"
                    )
                return np.asarray(value, dtype=np.float64)
            return np.full(qubit_count, float(value))

        return expand(self.p01), expand(self.p10)


@dataclass(frozen=True)
class CalibrationMatrix:
    """Column-stochastic confusion matrix A[observed, true] over bitstrings."""

    matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=np.float64)
        object.__setattr__(self, "matrix", a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MeasurementError(f"calibration matrix must be square, got {a.shape}")
        size = a.shape[0]
        if size < 2 or (size & (size - 1)) != 0:
            raise MeasurementError(f"calibration size {size} is not a power of two")
        if np.any(a < -1e-12):
            raise MeasurementError("calibration matrix has negative entries")
        col_sums = a.sum(axis=0)
        if np.max(np.abs(col_sums - 1.0)) > _COLUMN_SUM_TOL:
            raise MeasurementError("calibration matrix columns must sum to 1")

    @property
    def qubit_count(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1


def _confusion_factor(p01: float, p10: float) -> np.ndarray:
    return np.array([[1.0 - p01, p10], [p01, 1.0 - p10]], dtype=np.float64)


def build_calibration(noise: ReadoutNoise, qubit_count: int) -> CalibrationMatrix:
    """Tensor product of per-qubit confusion factors over the register."""
    if not 1 <= qubit_count <= MAX_CALIBRATION_QUBITS:
        raise MeasurementError(
            f"qubit count {qubit_count} outside 1..{MAX_CALIBRATION_QUBITS}"
        )
    p01, p10 = noise.rates_for(qubit_count)
    factors = [_confusion_factor(p01[n], p10[n]) for n in range(qubit_count)]
    # bitstring index packs qubit q-1 in the most significant position
    full = reduce(np.kron, reversed(factors))
    return CalibrationMatrix(full)


def _apply_confusion(probs: np.ndarray, noise: ReadoutNoise, qubit_count: int) -> np.ndarray:
    p01, p10 = noise.rates_for(qubit_count)
    out = probs.reshape((2,) * qubit_count)
    for n in range(qubit_count):
        axis = qubit_count - 1 - n
        factor = _confusion_factor(p01[n], p10[n])
        out = np.moveaxis(np.tensordot(factor, out, axes=([1], [axis])), 0, axis)
    return out.reshape(-1)


def _rotated_probabilities(state: Statevector, axes: str) -> np.ndarray:
    scratch = state.copy()
    for n, c in enumerate(axes):
        if c == "X":
            apply_single_qubit(scratch, n, _ROTATE_X)
        elif c == "Y":
            apply_single_qubit(scratch, n, _ROTATE_Y)
    probs = np.abs(scratch.amplitudes) ** 2
    total = probs.sum()
    return probs / total


def _parity_signs(size: int, support_mask: int) -> np.ndarray:
    idx = np.arange(size, dtype=np.int64)
    bits = np.bitwise_count((idx & support_mask).astype(np.uint64)).astype(np.int64)
    return (1 - 2 * (bits & 1)).astype(np.float64)


def _support_mask(axes: str) -> int:
    mask = 0
    for n, c in enumerate(axes):
        if c != "I":
            mask |= 1 << n
    return mask


def _measure_string(
    state: Statevector,
    axes: str,
    plan: ShotPlan,
    noise: ReadoutNoise | None,
    calibration: CalibrationMatrix | None,
    string_index: int,
) -> tuple[float, float]:
    """Estimate one string's expectation; returns (estimate, stderr).

    Identity strings short-circuit to exactly (1.0, 0.0) with no sampling.
    """
    if len(axes) != state.qubit_count:
        raise MeasurementError(
            f"axes {axes!r} do not span the {state.qubit_count}-qubit register"
        )
    support = _support_mask(axes)
    if support == 0:
        return 1.0, 0.0
    probs = _rotated_probabilities(state, axes)
    if noise is not None:
        probs = _apply_confusion(probs, noise, state.qubit_count)
    shots = plan.shots_per_string
    rng = np.random.default_rng(plan.entropy() + (string_index,))
    counts = rng.multinomial(shots, np.clip(probs, 0.0, None) / np.clip(probs, 0.0, None).sum())
    signs = _parity_signs(probs.shape[0], support)
    if calibration is not None:
        quasi = mitigate_counts(counts, calibration)
        estimate = float(np.dot(quasi, signs))
    else:
        estimate = float(np.dot(counts, signs) / shots)
    estimate = min(1.0, max(-1.0, estimate))
    if shots > 1:
        stderr = math.sqrt(max(0.0, 1.0 - estimate * estimate) / (shots - 1))
    else:
        stderr = 0.0
    return estimate, stderr


def measure_pauli(
    state: Statevector,
    term_axes: str,
    plan: ShotPlan,
    noise: ReadoutNoise | None = None,
) -> float:
    """Shot-sampled estimate of one Pauli string's expectation value.

    The estimator is unbiased in the noiseless case with true standard error
    at most 1/sqrt(shots); identical inputs give bit-identical results.
    """
    estimate, _ = _measure_string(state, term_axes, plan, noise, None, 0)
    return estimate


def sampled_energy(
    pauli_sum: PauliSum,
    state: Statevector,
    plan: ShotPlan,
    noise: ReadoutNoise | None = None,
    mitigation: CalibrationMatrix | None = None,
) -> tuple[float, float]:
    """Energy estimate over all strings: sum of coefficient * estimate.

    Coefficients must be real (Hermitian source); the returned stderr is the
    quadrature propagation sqrt(sum coef**2 * var) over sampled strings.
    """
    if state.qubit_count != pauli_sum.qubit_count:
        raise MeasurementError(
            f"state spans {state.qubit_count} qubits but operator spans "
            f"{pauli_sum.qubit_count}"
        )
    energy = 0.0
    variance = 0.0
    for index, term in enumerate(pauli_sum.terms):
        if abs(term.coefficient.imag) > 1e-10:
            raise MeasurementError(
                f"term {term.axes!r} has complex coefficient {term.coefficient!r}; "
                f"sampling requires a Hermitian operator"
            )
        coef = term.coefficient.real
        estimate, stderr = _measure_string(state, term.axes, plan, noise, mitigation, index)
        energy += coef * estimate
        variance += (coef * stderr) ** 2
    return energy, math.sqrt(variance)


def mitigate_counts(raw, calibration: CalibrationMatrix) -> np.ndarray:
    """Correct an observed histogram into a quasi-probability vector.

    Solves calibration @ x = frequencies by least squares, clips negative
    components, and renormalizes.  Raises on empty histograms and on
    ill-conditioned calibrations.
    """
    counts = np.asarray(raw, dtype=np.float64)
    a = calibration.matrix
    if counts.shape != (a.shape[0],):
        raise MeasurementError(
            f"histogram of {counts.shape} outcomes does not match calibration size {a.shape[0]}"
        )
    total = counts.sum()
    if total <= 0:
        raise MeasurementError("histogram sums to zero; nothing to mitigate")
    if np.linalg.cond(a) > _CONDITION_LIMIT:
        raise MeasurementError("calibration matrix is ill-conditioned; cannot invert")
    solution, *_ = np.linalg.lstsq(a, counts / total, rcond=None)
    solution = np.clip(solution, 0.0, None)
    mass = solution.sum()
    if mass <= 0:
        raise MeasurementError("mitigation produced an empty distribution")
    return solution / mass
