"""End-to-end orchestration: select, encode, minimize, report.

A run loads a fixture, ranks its configurations, keeps the top 2**q, encodes
the kept principal submatrix as a Pauli sum, minimizes the energy with the
hardware-style ansatz, and reports tail statistics against exact references.
Nuclear repulsion, when the fixture carries it, is folded into the identity
Pauli coefficient so every reported energy is a total energy; energy deltas
are invariant to that shift.

Sampling randomness derives from the run's shot-plan seed extended with the
objective-evaluation index, so each optimizer evaluation sees fresh shot
noise while the whole run stays reproducible.  Curve and study sweeps run
their independent points on a thread pool capped by VQSCI_THREADS.
"""

from __future__ import annotations

import dataclasses
import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzSpec, default_layers, prepare_state
from .classical_oracle import (
    SelectionReport,
    exact_ground,
    rank_configurations,
    select_minimal_qubits,
)
from .matrix_model import load_fixture, principal_submatrix
from .measurement import ReadoutNoise, ShotPlan, build_calibration, sampled_energy
from .optimizer import OptimizationTrace, OptimizerConfig, minimize, tail_statistics
from .pauli_encoding import (
    BitEncoding,
    PauliSum,
    PauliTerm,
    combine_terms,
    encode_matrix,
    entry_scale,
    reconstruct_dense,
    stream_entry_terms,
)
from .resource_analysis import ResourceError, ResourceProfile, build_profile

__all__ = [
    "DriverError",
    "RunConfig",
    "VqsciResult",
    "run",
    "dissociation_curve",
    "convergence_study",
]

CHEMICAL_ACCURACY = 0.0016


class DriverError(RuntimeError):
    """Stage-labeled failure; the message starts with [stage]."""


def _guard(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except DriverError:
        raise
    except Exception as exc:
        raise DriverError(f"[{stage}] {exc}") from exc


@dataclass(frozen=True)
class RunConfig:
    fixture_path: str = ""
    mode: str = "exact"  # "exact" | "sampled"
    qubits: int | None = None
    layers: int | None = None
    shot_plan: ShotPlan | None = None
    noise: ReadoutNoise | None = None
    mitigation: bool = False
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    streaming: bool = False
    padding: str = "reject"
    selection_threshold: float = CHEMICAL_ACCURACY

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise DriverError(f"[config] unknown mode {self.mode!r}")
        if self.mode == "sampled" and self.shot_plan is None:
            raise DriverError("[config] sampled mode requires a shot plan")
        if self.padding not in ("reject", "extend"):
            raise DriverError(f"[config] unknown padding policy {self.padding!r}")
        if self.qubits is not None and not 1 <= self.qubits <= 24:
            raise DriverError(f"[config] qubit override {self.qubits} outside [1, 24]")
        if self.layers is not None and self.layers < 0:
            raise DriverError("[config] layer override must be nonnegative")
        if self.selection_threshold <= 0:
            raise DriverError("[config] selection threshold must be positive")


@dataclass
class VqsciResult:
    selection: SelectionReport
    qubit_count: int
    layer_count: int
    layers_validated: bool
    pauli_term_count: int
    trace: OptimizationTrace
    tail_mean: float
    tail_std: float
    energy_sci_exact: float
    energy_fci: float | None
    delta_sci: float
    delta_fci: float | None
    resources: ResourceProfile | None
    provenance: dict[str, str]
    mode: str
    wall_clock_seconds: float

    def to_dict(self) -> dict:
        """JSON-ready mapping with explicit units in the key names."""
        resources = None
        if self.resources is not None:
            resources = dataclasses.asdict(self.resources)
        return {
            "mode": self.mode,
            "qubits": self.qubit_count,
            "layers": self.layer_count,
            "layers_validated": self.layers_validated,
            "pauli_term_count": self.pauli_term_count,
            "selection": {
                "ordering": [int(i) for i in self.selection.ordering],
                "chosen_q": self.selection.chosen_q,
                "chosen_count": self.selection.chosen_count,
                "achieved_energy_hartree": self.selection.achieved_energy,
                "reference_energy_hartree": self.selection.reference_energy,
                "reference_kind": self.selection.reference_kind,
                "threshold_met": self.selection.threshold_met,
            },
            "tail_mean_hartree": self.tail_mean,
            "tail_std_hartree": self.tail_std,
            "energy_sci_exact_hartree": self.energy_sci_exact,
            "energy_fci_hartree": self.energy_fci,
            "delta_sci_hartree": self.delta_sci,
            "delta_fci_hartree": self.delta_fci,
            "best_energy_hartree": self.trace.best_energy,
            "iterations_used": self.trace.iterations_used,
            "converged": self.trace.converged,
            "energy_trace_hartree": list(self.trace.energies),
            "stderr_trace_hartree": list(self.trace.stderrs),
            "resources": resources,
            "provenance": dict(self.provenance),
            "wall_clock_seconds": self.wall_clock_seconds,
        }


def _with_identity_shift(pauli_sum: PauliSum, shift: float) -> PauliSum:
    if shift == 0.0:
        return pauli_sum
    identity = "I" * pauli_sum.qubit_count
    terms = list(pauli_sum.terms)
    if terms and terms[0].axes == identity:
        terms[0] = PauliTerm(terms[0].coefficient + shift, identity)
    else:
        terms.insert(0, PauliTerm(complex(shift), identity))
    return PauliSum(tuple(terms), pauli_sum.qubit_count)


def _encode(sub, qubits: int, padding: str, streaming: bool) -> PauliSum:
    encoding = BitEncoding(qubits)
    if streaming:
        scale = entry_scale(sub, encoding, padding)
        return combine_terms(stream_entry_terms(sub, encoding, padding), qubits, scale)
    return encode_matrix(sub, encoding, padding)


def _resolve_layers(config: RunConfig, qubits: int) -> tuple[int, bool]:
    if config.layers is not None:
        return config.layers, True
    return default_layers(qubits)


def _resolve_optimizer(config: RunConfig) -> OptimizerConfig:
    if config.optimizer.convergence_tol is not None:
        return config.optimizer
    tol = 1e-6 if config.mode == "exact" else 1e-4
    return dataclasses.replace(config.optimizer, convergence_tol=tol)


def _objective(config: RunConfig, spec: AnsatzSpec, operator: PauliSum):
    if config.mode == "exact":
        dense = reconstruct_dense(operator)

        def exact_objective(values: np.ndarray) -> tuple[float, float]:
            amps = prepare_state(spec, values).amplitudes
            return float(np.vdot(amps, dense @ amps).real), 0.0

        return exact_objective

    plan = config.shot_plan
    base = plan.entropy()
    calibration = None
    if config.mitigation and config.noise is not None:
        calibration = build_calibration(config.noise, spec.qubit_count)
    counter = itertools.count()

    def sampled_objective(values: np.ndarray) -> tuple[float, float]:
        eval_plan = ShotPlan(plan.shots_per_string, base + (next(counter),))
        state = prepare_state(spec, values)
        return sampled_energy(operator, state, eval_plan, config.noise, calibration)

    return sampled_objective


def run(config: RunConfig) -> VqsciResult:
    """Execute one full solve and return the reported result."""
    started = time.perf_counter()
    fixture = _guard("load", load_fixture, config.fixture_path)
    matrix = fixture.matrix
    determinants = fixture.determinants
    dim = matrix.dimension
    shift = determinants.nuclear_repulsion or 0.0

    if config.qubits is None:
        report = _guard(
            "selection", select_minimal_qubits, fixture, config.selection_threshold
        )
        qubits, count = report.chosen_q, report.chosen_count
        sub = _guard("selection", principal_submatrix, matrix, report.ordering, count)
    else:
        qubits = config.qubits
        count = min(1 << qubits, dim)
        full = None
        if determinants.amplitudes is not None:
            amplitudes = determinants.amplitudes
        else:
            full = _guard("selection", exact_ground, matrix)
            amplitudes = full.eigenvector
        ordering = _guard("selection", rank_configurations, amplitudes)
        sub = _guard("selection", principal_submatrix, matrix, ordering, count)
        achieved = _guard("selection", exact_ground, sub).energy + shift
        if determinants.reference_fci_energy is not None:
            reference, kind = determinants.reference_fci_energy, "fci"
        else:
            if full is None:
                full = _guard("selection", exact_ground, matrix)
            reference, kind = full.energy + shift, "self-referential"
        report = SelectionReport(
            ordering=ordering,
            chosen_q=qubits,
            chosen_count=count,
            achieved_energy=achieved,
            reference_energy=reference,
            reference_kind=kind,
            threshold_met=abs(achieved - reference) <= config.selection_threshold,
        )

    operator = _guard("encoding", _encode, sub, qubits, config.padding, config.streaming)
    operator = _with_identity_shift(operator, shift)

    layers, layers_validated = _guard("ansatz", _resolve_layers, config, qubits)
    spec = _guard("ansatz", AnsatzSpec, qubits, layers)
    objective = _guard("objective", _objective, config, spec, operator)
    opt = _resolve_optimizer(config)
    initial = np.zeros(spec.parameter_count)
    trace = _guard("optimization", minimize, objective, spec.parameter_count, opt, initial)
    tail_mean, tail_std = tail_statistics(trace)

    energy_sci_exact = report.achieved_energy
    energy_fci = determinants.reference_fci_energy
    resources = None
    if determinants.n_electrons is not None and determinants.n_spin_orbitals is not None:
        restricted = (
            determinants.n_electrons % 2 == 0 and determinants.n_spin_orbitals % 2 == 0
        )
        try:
            resources = build_profile(
                determinants.n_electrons, determinants.n_spin_orbitals, count, restricted
            )
        except ResourceError:
            resources = None

    return VqsciResult(
        selection=report,
        qubit_count=qubits,
        layer_count=layers,
        layers_validated=layers_validated,
        pauli_term_count=operator.n_terms,
        trace=trace,
        tail_mean=tail_mean,
        tail_std=tail_std,
        energy_sci_exact=energy_sci_exact,
        energy_fci=energy_fci,
        delta_sci=abs(tail_mean - energy_sci_exact),
        delta_fci=abs(tail_mean - energy_fci) if energy_fci is not None else None,
        resources=resources,
        provenance=dict(fixture.provenance),
        mode=config.mode,
        wall_clock_seconds=time.perf_counter() - started,
    )


def _max_workers(task_count: int) -> int:
    env = os.environ.get("VQSCI_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(task_count, cap))


def _result_row(result: VqsciResult) -> dict:
    return {
        "qubits": result.qubit_count,
        "layers": result.layer_count,
        "determinant_count": result.selection.chosen_count,
        "tail_mean_hartree": result.tail_mean,
        "tail_std_hartree": result.tail_std,
        "energy_sci_exact_hartree": result.energy_sci_exact,
        "energy_fci_hartree": result.energy_fci,
        "delta_sci_hartree": result.delta_sci,
        "delta_fci_hartree": result.delta_fci,
        "iterations_used": result.trace.iterations_used,
        "converged": result.trace.converged,
    }


def dissociation_curve(fixture_paths, config: RunConfig) -> list[dict]:
    """One solve per geometry; rows carry the distance found in provenance."""
    paths = [str(p) for p in fixture_paths]
    if not paths:
        raise DriverError("[curve] needs at least one fixture")

    def solve(path: str) -> dict:
        result = run(dataclasses.replace(config, fixture_path=path))
        distance = result.provenance.get("bond_length_angstrom")
        row = {"fixture": path, "distance_angstrom": None if distance is None else float(distance)}
        row.update(_result_row(result))
        return row

    with ThreadPoolExecutor(max_workers=_max_workers(len(paths))) as pool:
        return list(pool.map(solve, paths))


def convergence_study(fixture_path, q_values, config: RunConfig) -> list[dict]:
    """One solve per register size over the same fixture, smallest q first."""
    sizes = sorted(set(int(q) for q in q_values))
    if not sizes:
        raise DriverError("[study] needs at least one qubit count")

    def solve(qubits: int) -> dict:
        result = run(
            dataclasses.replace(config, fixture_path=str(fixture_path), qubits=qubits)
        )
        row = _result_row(result)
        reference = result.selection.reference_energy
        row["reference_energy_hartree"] = reference
        row["reference_kind"] = result.selection.reference_kind
        row["delta_reference_hartree"] = abs(result.tail_mean - reference)
        row["chemically_accurate"] = row["delta_reference_hartree"] <= CHEMICAL_ACCURACY
        return row

    with ThreadPoolExecutor(max_workers=_max_workers(len(sizes))) as pool:
        return list(pool.map(solve, sizes))
