"""Command-line surface.

Subcommands: encode, solve, curve, study, resources, mitigate-demo.  Results
go to stdout or --output as JSON (default) or CSV; diagnostics go to stderr.
Exit codes: 0 success, 1 validation error (bad flags, bad fixture, bad
configuration), 2 runtime failure (solver or I/O breakdown).  Identical
invocations with identical seeds produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys

import numpy as np

from .classical_oracle import exact_ground
from .matrix_model import load_fixture, principal_submatrix
from .measurement import ReadoutNoise, ShotPlan, build_calibration, sampled_energy
from .optimizer import OptimizerConfig
from .pauli_encoding import (
    BitEncoding,
    combine_terms,
    encode_matrix,
    entry_scale,
    required_qubits,
    stream_entry_terms,
    to_text,
)
from .resource_analysis import KNOWN_MOLECULES, build_profile
from .statevector_engine import Statevector, exact_expectation
from .vqsci_driver import (
    DriverError,
    RunConfig,
    convergence_study,
    dissociation_curve,
    run,
)

__all__ = ["main"]

_RESOURCE_COLUMNS = [
    "molecule",
    "N",
    "M",
    "d_fci",
    "d_sci",
    "q_vqe",
    "q_fci",
    "q_sci",
    "p_upper_sci",
    "sparsity_bound",
]


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the validation code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_noise(text: str | None) -> ReadoutNoise | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--noise expects 'p01,p10', got {text!r}")
    return ReadoutNoise(float(parts[0]), float(parts[1]))


def _add_solver_flags(sub: argparse.ArgumentParser, with_matrix: bool = True):
    if with_matrix:
        sub.add_argument("--matrix", required=True, help="fixture file path (VQSCI-FIX v1 JSON)")
    sub.add_argument(
        "--mode", choices=("exact", "sampled"), default="exact",
        help="expectation evaluation: exact statevector or shot sampling",
    )
    sub.add_argument("--qubits", type=int, default=None, help="register size override")
    sub.add_argument("--layers", type=int, default=None, help="entangling layer override")
    sub.add_argument("--shots", type=int, default=20000, help="shots per Pauli string (sampled mode)")
    sub.add_argument("--seed", type=int, default=0, help="run seed for sampling and optimizer")
    sub.add_argument("--noise", default=None, help="readout flip rates 'p01,p10' (dimensionless)")
    sub.add_argument(
        "--mitigation", choices=("on", "off"), default="off",
        help="calibration-matrix readout correction",
    )
    sub.add_argument(
        "--optimizer", choices=("cobyla", "simplex"), default="cobyla",
        help="derivative-free minimizer",
    )
    sub.add_argument("--max-iters", type=int, default=10000, help="objective evaluation budget")
    sub.add_argument(
        "--tol", type=float, default=None,
        help="optimizer region-size tolerance (radians); default 1e-6 exact, 1e-4 sampled",
    )
    sub.add_argument("--stream", action="store_true", help="stream per-entry terms while encoding")
    sub.add_argument(
        "--padding", choices=("reject", "extend"), default="reject",
        help="policy when dimension falls short of 2**qubits",
    )
    sub.add_argument(
        "--threshold", type=float, default=0.0016,
        help="selection energy threshold in hartree",
    )


def _add_output_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--output", default=None, help="write results here instead of stdout")
    sub.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output serialization"
    )


def _run_config(args, fixture_path: str) -> RunConfig:
    plan = ShotPlan(args.shots, args.seed) if args.mode == "sampled" else None
    optimizer = OptimizerConfig(
        method=args.optimizer,
        max_iterations=args.max_iters,
        convergence_tol=args.tol,
        rng_seed=args.seed,
    )
    return RunConfig(
        fixture_path=fixture_path,
        mode=args.mode,
        qubits=args.qubits,
        layers=args.layers,
        shot_plan=plan,
        noise=_parse_noise(args.noise),
        mitigation=args.mitigation == "on",
        optimizer=optimizer,
        streaming=args.stream,
        padding=args.padding,
        selection_threshold=args.threshold,
    )


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv_text(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def _tabular(rows: list[dict], fmt: str) -> str:
    return _csv_text(rows) if fmt == "csv" else _json_text(rows)


def _cmd_encode(args) -> str:
    fixture = load_fixture(args.matrix)
    qubits = args.qubits or required_qubits(fixture.matrix.dimension)
    encoding = BitEncoding(qubits)
    if args.stream:
        scale = entry_scale(fixture.matrix, encoding, args.padding)
        pauli_sum = combine_terms(
            stream_entry_terms(fixture.matrix, encoding, args.padding), qubits, scale
        )
    else:
        pauli_sum = encode_matrix(fixture.matrix, encoding, args.padding)
    return to_text(pauli_sum)


def _cmd_solve(args) -> str:
    result = run(_run_config(args, args.matrix))
    full = result.to_dict()
    # timing would break byte-identical reruns of seeded invocations
    full.pop("wall_clock_seconds", None)
    if args.format == "csv":
        row = {
            key: value
            for key, value in full.items()
            if not isinstance(value, (dict, list)) or value is None
        }
        return _csv_text([row])
    return _json_text(full)


def _cmd_curve(args) -> str:
    rows = dissociation_curve(args.matrix, _run_config(args, args.matrix[0]))
    return _tabular(rows, args.format)


def _cmd_study(args) -> str:
    if args.q_max < args.q_min:
        raise ValueError(f"--q-max {args.q_max} below --q-min {args.q_min}")
    q_values = range(args.q_min, args.q_max + 1)
    rows = convergence_study(args.matrix, q_values, _run_config(args, args.matrix))
    return _tabular(rows, args.format)


def _cmd_resources(args) -> str:
    rows = []
    if args.electrons is not None or args.orbitals is not None or args.dsci is not None:
        if None in (args.electrons, args.orbitals, args.dsci):
            raise ValueError("--electrons, --orbitals, and --dsci must be given together")
        name = args.molecule or "custom"
        restricted = args.electrons % 2 == 0 and args.orbitals % 2 == 0
        profile = build_profile(args.electrons, args.orbitals, args.dsci, restricted)
        rows.append((name, profile))
    elif args.molecule is not None:
        if args.molecule not in KNOWN_MOLECULES:
            known = ", ".join(KNOWN_MOLECULES)
            raise ValueError(f"unknown molecule {args.molecule!r}; known: {known}")
        n, m, d = KNOWN_MOLECULES[args.molecule]
        rows.append((args.molecule, build_profile(n, m, d)))
    else:
        for name, (n, m, d) in KNOWN_MOLECULES.items():
            rows.append((name, build_profile(n, m, d)))
    if args.format == "json":
        return _json_text(
            [{"molecule": name, **dataclasses.asdict(profile)} for name, profile in rows]
        )
    table = [
        {
            "molecule": name,
            "N": p.n_electrons,
            "M": p.n_spin_orbitals,
            "d_fci": p.d_fci,
            "d_sci": p.d_sci,
            "q_vqe": p.q_vqe,
            "q_fci": p.q_fci,
            "q_sci": p.q_sci,
            "p_upper_sci": p.p_upper_sci,
            "sparsity_bound": p.sparsity_bound,
        }
        for name, p in rows
    ]
    return _csv_text(table)


def _cmd_mitigate_demo(args) -> str:
    noise = _parse_noise(args.noise)
    if noise is None:
        raise ValueError("mitigate-demo requires --noise p01,p10")
    fixture = load_fixture(args.matrix)
    matrix = fixture.matrix
    qubits = args.qubits or required_qubits(matrix.dimension)
    count = min(1 << qubits, matrix.dimension)
    if fixture.determinants.amplitudes is not None:
        order = np.argsort(-np.abs(fixture.determinants.amplitudes), kind="stable")
    else:
        order = np.argsort(-np.abs(exact_ground(matrix).eigenvector), kind="stable")
    sub = principal_submatrix(matrix, order, count)
    encoding = BitEncoding(qubits)
    pauli_sum = encode_matrix(sub, encoding, args.padding)
    ground = exact_ground(sub)
    amplitudes = np.zeros(1 << qubits, dtype=np.complex128)
    amplitudes[:count] = ground.eigenvector
    state = Statevector(amplitudes, qubits)
    exact_energy = exact_expectation(state, pauli_sum)
    plan = ShotPlan(args.shots, args.seed)
    calibration = build_calibration(noise, qubits)
    raw_energy, raw_err = sampled_energy(pauli_sum, state, plan, noise, None)
    fixed_energy, fixed_err = sampled_energy(pauli_sum, state, plan, noise, calibration)
    raw_bias = abs(raw_energy - exact_energy)
    fixed_bias = abs(fixed_energy - exact_energy)
    return _json_text(
        {
            "qubits": qubits,
            "shots_per_string": args.shots,
            "noise_p01": noise.p01,
            "noise_p10": noise.p10,
            "exact_energy_hartree": exact_energy,
            "unmitigated_energy_hartree": raw_energy,
            "unmitigated_stderr_hartree": raw_err,
            "mitigated_energy_hartree": fixed_energy,
            "mitigated_stderr_hartree": fixed_err,
            "unmitigated_bias_hartree": raw_bias,
            "mitigated_bias_hartree": fixed_bias,
            "bias_ratio": raw_bias / fixed_bias if fixed_bias > 0 else float("inf"),
        }
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="vqsci", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    encode = subs.add_parser("encode", help="print the Pauli decomposition of a fixture matrix")
    encode.add_argument("--matrix", required=True, help="fixture file path (VQSCI-FIX v1 JSON)")
    encode.add_argument("--qubits", type=int, default=None, help="register size override")
    encode.add_argument("--stream", action="store_true", help="stream per-entry terms while encoding")
    encode.add_argument(
        "--padding", choices=("reject", "extend"), default="reject",
        help="policy when dimension falls short of 2**qubits",
    )
    _add_output_flags(encode)
    encode.set_defaults(handler=_cmd_encode)

    solve = subs.add_parser("solve", help="run one variational groundstate solve")
    _add_solver_flags(solve)
    _add_output_flags(solve)
    solve.set_defaults(handler=_cmd_solve)

    curve = subs.add_parser("curve", help="solve a sequence of geometries (energies in hartree)")
    curve.add_argument(
        "--matrix", required=True, nargs="+",
        help="fixture paths, one per geometry (distances in angstrom from provenance)",
    )
    _add_solver_flags(curve, with_matrix=False)
    _add_output_flags(curve)
    curve.set_defaults(handler=_cmd_curve)

    study = subs.add_parser("study", help="sweep register sizes over one fixture")
    study.add_argument("--q-min", type=int, required=True, help="smallest register size")
    study.add_argument("--q-max", type=int, required=True, help="largest register size")
    _add_solver_flags(study)
    _add_output_flags(study)
    study.set_defaults(handler=_cmd_study)

    resources = subs.add_parser("resources", help="qubit/term/sparsity planning table")
    resources.add_argument("--molecule", default=None, help="built-in molecule name")
    resources.add_argument("--electrons", type=int, default=None, help="electron count N")
    resources.add_argument("--orbitals", type=int, default=None, help="spin-orbital count M")
    resources.add_argument("--dsci", type=int, default=None, help="selected determinant count")
    _add_output_flags(resources)
    resources.set_defaults(handler=_cmd_resources)

    demo = subs.add_parser(
        "mitigate-demo", help="sample one state with readout noise, with and without mitigation"
    )
    demo.add_argument("--matrix", required=True, help="fixture file path (VQSCI-FIX v1 JSON)")
    demo.add_argument("--qubits", type=int, default=None, help="register size override")
    demo.add_argument("--shots", type=int, default=100000, help="shots per Pauli string")
    demo.add_argument("--seed", type=int, default=0, help="sampling seed")
    demo.add_argument("--noise", required=True, help="readout flip rates 'p01,p10'")
    demo.add_argument(
        "--padding", choices=("reject", "extend"), default="reject",
        help="policy when dimension falls short of 2**qubits",
    )
    _add_output_flags(demo)
    demo.set_defaults(handler=_cmd_mitigate_demo)

    return parser


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


_VALIDATION_STAGES = ("[config]", "[load]", "[selection]", "[encoding]", "[ansatz]")


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, DriverError):
        message = str(exc)
        if isinstance(exc.__cause__, ValueError):
            return 1
        if any(message.startswith(stage) for stage in _VALIDATION_STAGES):
            return 1
        return 2
    if isinstance(exc, ValueError):
        return 1
    return 2


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.handler(args)
    except Exception as exc:
        print(f"vqsci: error: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    try:
        _emit(payload, args.output)
    except OSError as exc:
        print(f"vqsci: error: cannot write output: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
