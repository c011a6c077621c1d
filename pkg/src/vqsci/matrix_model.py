"""Hermitian matrix data model, determinant bookkeeping, and fixture files.

A fixture bundles a Hermitian matrix with the ordered configuration labels it
was built from, optional groundstate amplitudes, and free-form provenance.
Files use the VQSCI-FIX v1 layout: a single JSON document whose numbers are
written as shortest round-trip decimal text, so saving and reloading
reproduces every float bit-exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "FixtureError",
    "HermitianMatrix",
    "DeterminantSet",
    "MatrixFixture",
    "load_fixture",
    "save_fixture",
    "principal_submatrix",
]

HERMITICITY_TOL = 1e-12
DIAGONAL_IMAG_TOL = 1e-12
AMPLITUDE_NORM_TOL = 1e-6


class FixtureError(ValueError):
    """A fixture file or matrix failed structural validation."""


def _check_hermitian(data: np.ndarray) -> None:
    diag_imag = np.abs(data.diagonal().imag)
    worst_d = int(np.argmax(diag_imag))
    if diag_imag[worst_d] >= DIAGONAL_IMAG_TOL:
        raise FixtureError(
            f"diagonal entry ({worst_d},{worst_d}) has imaginary part "
            f"{data[worst_d, worst_d].imag:.3e}"
        )
    delta = np.abs(data - data.conj().T)
    worst = int(np.argmax(delta))
    j, k = divmod(worst, data.shape[0])
    if delta[j, k] > HERMITICITY_TOL:
        a, b = min(j, k), max(j, k)
        raise FixtureError(
            f"Hermiticity violation at entry pair ({a},{b}): "
            f"entry({a},{b})={data[a, b]} but entry({b},{a})={data[b, a]}"
        )


@dataclass(frozen=True)
class HermitianMatrix:
    """Square complex Hermitian matrix with a declared storage preference.

    ``storage_kind`` only controls serialization ("dense" writes the full
    row-major table, "sparse" writes one triplet per stored upper-triangle
    entry); in memory the matrix is always a dense complex array.
    """

    data: np.ndarray
    storage_kind: str = "dense"

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise FixtureError(f"matrix must be square and nonempty, got shape {arr.shape}")
        if self.storage_kind not in ("dense", "sparse"):
            raise FixtureError(f"unknown storage kind {self.storage_kind!r}")
        _check_hermitian(arr)

    @property
    def dimension(self) -> int:
        return self.data.shape[0]

    def entry(self, j: int, k: int) -> complex:
        return complex(self.data[j, k])


@dataclass(frozen=True)
class DeterminantSet:
    """Ordered configuration labels plus optional groundstate metadata.

    Amplitudes, when present, are groundstate weights aligned with ``labels``
    and must be normalized.  ``nuclear_repulsion`` and
    ``reference_fci_energy`` are total-energy bookkeeping in Hartree.
    """

    labels: tuple[str, ...]
    amplitudes: np.ndarray | None = None
    n_electrons: int | None = None
    n_spin_orbitals: int | None = None
    nuclear_repulsion: float | None = None
    reference_fci_energy: float | None = None

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if self.amplitudes is not None:
            amps = np.array(self.amplitudes, dtype=np.float64, copy=True)
            amps.setflags(write=False)
            if amps.ndim != 1 or amps.shape[0] != len(labels):
                raise FixtureError(
                    f"amplitudes length {amps.shape} does not match {len(labels)} labels"
                )
            norm = float(np.sum(amps * amps))
            if not (1.0 - AMPLITUDE_NORM_TOL <= norm <= 1.0 + AMPLITUDE_NORM_TOL):
                raise FixtureError(f"amplitude squared norm {norm!r} is not 1 within 1e-6")
            object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class MatrixFixture:
    matrix: HermitianMatrix
    determinants: DeterminantSet
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.determinants.labels) != self.matrix.dimension:
            raise FixtureError(
                f"{len(self.determinants.labels)} labels for dimension "
                f"{self.matrix.dimension} matrix"
            )
        prov = {str(k): str(v) for k, v in dict(self.provenance).items()}
        object.__setattr__(self, "provenance", prov)


def _require(raw: dict, key: str):
    if key not in raw:
        raise FixtureError(f"missing required field {key!r}")
    return raw[key]


def _parse_entries_dense(entries, dim: int) -> np.ndarray:
    if len(entries) != dim * dim:
        raise FixtureError(
            f"dense entries length {len(entries)} != dimension**2 = {dim * dim}"
        )
    data = np.zeros((dim, dim), dtype=np.complex128)
    for pos, pair in enumerate(entries):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise FixtureError(f"dense entry {pos} is not a [re, im] pair")
        j, k = divmod(pos, dim)
        data[j, k] = complex(float(pair[0]), float(pair[1]))
    return data


def _parse_entries_sparse(entries, dim: int) -> np.ndarray:
    data = np.zeros((dim, dim), dtype=np.complex128)
    seen: dict[tuple[int, int], complex] = {}
    for pos, quad in enumerate(entries):
        if not (isinstance(quad, list) and len(quad) == 4):
            raise FixtureError(f"sparse entry {pos} is not a [j, k, re, im] quadruple")
        j, k = int(quad[0]), int(quad[1])
        if not (0 <= j < dim and 0 <= k < dim):
            raise FixtureError(f"sparse entry {pos} index ({j},{k}) outside 0..{dim - 1}")
        if (j, k) in seen:
            raise FixtureError(f"duplicate sparse entry for index pair ({j},{k})")
        seen[(j, k)] = complex(float(quad[2]), float(quad[3]))
    for (j, k), value in seen.items():
        data[j, k] = value
        mirrored = (k, j)
        if mirrored not in seen:
            data[k, j] = value.conjugate()
    return data


def load_fixture(path: str | Path) -> MatrixFixture:
    """Read and validate a VQSCI-FIX v1 document.

    Raises FixtureError on malformed content or on any invariant violation
    (non-Hermitian entry, dimension mismatch, bad amplitude norm), naming the
    offending index where one exists.  I/O errors propagate.
    """
    p = Path(path)
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{p}: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise FixtureError(f"{p}: top level must be an object")
    version = _require(raw, "version")
    if version != 1:
        raise FixtureError(f"unsupported fixture version {version!r}")
    dim = _require(raw, "dimension")
    if not isinstance(dim, int) or dim < 1:
        raise FixtureError(f"dimension must be a positive integer, got {dim!r}")
    storage = _require(raw, "storage")
    if storage not in ("dense", "sparse"):
        raise FixtureError(f"storage must be 'dense' or 'sparse', got {storage!r}")
    entries = _require(raw, "entries")
    if not isinstance(entries, list):
        raise FixtureError("entries must be an array")
    if storage == "dense":
        data = _parse_entries_dense(entries, dim)
    else:
        data = _parse_entries_sparse(entries, dim)

    labels = _require(raw, "determinant_labels")
    if not isinstance(labels, list) or len(labels) != dim:
        raise FixtureError(
            f"determinant_labels must list exactly {dim} labels, got "
            f"{len(labels) if isinstance(labels, list) else type(labels).__name__}"
        )
    amplitudes = raw.get("amplitudes")
    if amplitudes is not None:
        amplitudes = np.array([float(a) for a in amplitudes], dtype=np.float64)

    determinants = DeterminantSet(
        labels=tuple(str(x) for x in labels),
        amplitudes=amplitudes,
        n_electrons=raw.get("n_electrons"),
        n_spin_orbitals=raw.get("n_spin_orbitals"),
        nuclear_repulsion=raw.get("nuclear_repulsion"),
        reference_fci_energy=raw.get("reference_fci_energy"),
    )
    provenance = raw.get("provenance", {})
    if not isinstance(provenance, dict):
        raise FixtureError("provenance must be a string map")
    matrix = HermitianMatrix(data, storage_kind=storage)
    return MatrixFixture(matrix, determinants, provenance)


def _format_number(x: float) -> str:
    # repr of a Python float is the shortest string that round-trips exactly
    if math.isnan(x) or math.isinf(x):
        raise FixtureError(f"non-finite number {x!r} cannot be serialized")
    return repr(float(x))


def _entry_lines(matrix: HermitianMatrix) -> list[str]:
    data = matrix.data
    dim = matrix.dimension
    lines = []
    if matrix.storage_kind == "dense":
        for j in range(dim):
            for k in range(dim):
                v = data[j, k]
                lines.append(f"[{_format_number(v.real)}, {_format_number(v.imag)}]")
    else:
        # one of each conjugate pair plus the diagonal; exact zeros skipped
        for j in range(dim):
            for k in range(j, dim):
                v = data[j, k]
                if v != 0:
                    lines.append(
                        f"[{j}, {k}, {_format_number(v.real)}, {_format_number(v.imag)}]"
                    )
    return lines


def save_fixture(fixture: MatrixFixture, path: str | Path) -> None:
    """Write a VQSCI-FIX v1 document; load_fixture(save_fixture(f)) == f.

    Entries are written one per line to keep large files diffable.
    """
    det = fixture.determinants
    out: list[str] = ["{"]
    out.append('"version": 1,')
    out.append(f'"dimension": {fixture.matrix.dimension},')
    out.append(f'"storage": {json.dumps(fixture.matrix.storage_kind)},')
    out.append('"entries": [')
    entry_lines = _entry_lines(fixture.matrix)
    for i, line in enumerate(entry_lines):
        out.append(line + ("," if i + 1 < len(entry_lines) else ""))
    out.append("],")
    out.append(f'"determinant_labels": {json.dumps(list(det.labels))},')
    if det.amplitudes is not None:
        amps = ", ".join(_format_number(a) for a in det.amplitudes)
        out.append(f'"amplitudes": [{amps}],')
    if det.n_electrons is not None:
        out.append(f'"n_electrons": {int(det.n_electrons)},')
    if det.n_spin_orbitals is not None:
        out.append(f'"n_spin_orbitals": {int(det.n_spin_orbitals)},')
    if det.nuclear_repulsion is not None:
        out.append(f'"nuclear_repulsion": {_format_number(det.nuclear_repulsion)},')
    if det.reference_fci_energy is not None:
        out.append(f'"reference_fci_energy": {_format_number(det.reference_fci_energy)},')
    out.append(f'"provenance": {json.dumps(fixture.provenance, indent=1)}')
    out.append("}")
    Path(path).write_text("\n".join(out) + "\n")


def principal_submatrix(matrix: HermitianMatrix, ordering, size: int) -> HermitianMatrix:
    """Reorder by ``ordering`` and keep the leading ``size`` rows and columns.

    ``ordering`` must be a full permutation of 0..D-1; entry (a, b) of the
    result equals entry(ordering[a], ordering[b]) of the input.
    """
    d = matrix.dimension
    order = np.asarray(ordering, dtype=np.int64)
    if order.shape != (d,) or not np.array_equal(np.sort(order), np.arange(d)):
        raise FixtureError("ordering must be a permutation of 0..D-1")
    if not isinstance(size, (int, np.integer)) or not 1 <= size <= d:
        raise FixtureError(f"submatrix size {size} outside 1..{d}")
    sel = order[:size]
    return HermitianMatrix(matrix.data[np.ix_(sel, sel)], matrix.storage_kind)
