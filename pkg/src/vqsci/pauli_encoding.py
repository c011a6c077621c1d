"""Decompose Hermitian matrices into weighted sums of Pauli strings.

Every matrix entry m[j,k] contributes m[j,k] * |j><k|, and the elementary
operator |j><k| factorizes over qubits into single-bit projectors and
raising/lowering operators with the two-term resolutions

    |0><0| = (I + Z)/2      |0><1| = (X + iY)/2
    |1><0| = (X - iY)/2     |1><1| = (I - Z)/2

so each entry expands into exactly 2**q strings whose coefficients have
magnitude |m[j,k]| * 2**-q.  The batch encoder and the per-entry streaming
path accumulate like terms in the same per-entry order, which makes their
combined outputs bit-identical, not merely close.

Bit convention (shared by the whole package, asserted here once): index k
maps to bits b_j with k = sum_j 2**j * b_j, i.e. qubit j carries bit weight
2**j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .matrix_model import HermitianMatrix

__all__ = [
    "EncodingError",
    "BitEncoding",
    "PauliTerm",
    "PauliSum",
    "required_qubits",
    "index_pair_to_terms",
    "encode_matrix",
    "stream_entry_terms",
    "entry_scale",
    "combine_terms",
    "reconstruct_dense",
    "axes_to_masks",
    "to_text",
    "from_text",
]

AXES = "IXYZ"
MAX_ENCODER_QUBITS = 24
MAX_COMBINE_QUBITS = 12
MAX_RECONSTRUCT_QUBITS = 12
DROP_RELATIVE_TOL = 1e-14

# axis codes: I=0, X=1, Y=2, Z=3; per (bra bit, ket bit) the two weighted axes
_AXIS0 = np.array([[0, 1], [1, 0]], dtype=np.int64)
_AXIS1 = np.array([[3, 2], [2, 3]], dtype=np.int64)
_COEF0 = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=np.complex128)
_COEF1 = np.array([[0.5, 0.5j], [-0.5j, -0.5]], dtype=np.complex128)

# scalar mirrors of the selector tables for the streaming hot path
_CH_AXIS0 = [[AXES[int(_AXIS0[a, b])] for b in (0, 1)] for a in (0, 1)]
_CH_AXIS1 = [[AXES[int(_AXIS1[a, b])] for b in (0, 1)] for a in (0, 1)]
_PY_COEF0 = [[complex(_COEF0[a, b]) for b in (0, 1)] for a in (0, 1)]
_PY_COEF1 = [[complex(_COEF1[a, b]) for b in (0, 1)] for a in (0, 1)]


class EncodingError(ValueError):
    """Raised for out-of-range indices, size guards, and padding rejections."""


def required_qubits(dimension: int) -> int:
    """Number of qubits needed to index ``dimension`` states: ceil(log2 D).

    A one-qubit register is the minimum; D of 1 or 2 both report 1.
    """
    if not isinstance(dimension, (int, np.integer)) or dimension < 1:
        raise EncodingError(f"dimension must be a positive integer, got {dimension!r}")
    return max(1, int(dimension - 1).bit_length())


@dataclass(frozen=True)
class BitEncoding:
    """Binary index<->bits mapping: qubit j holds the bit of weight 2**j."""

    qubit_count: int

    def __post_init__(self):
        if not 1 <= self.qubit_count <= MAX_ENCODER_QUBITS:
            raise EncodingError(
                f"qubit count {self.qubit_count} outside 1..{MAX_ENCODER_QUBITS}"
            )

    def bits_of(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < (1 << self.qubit_count):
            raise EncodingError(f"index {index} outside register of {self.qubit_count} qubits")
        return tuple((index >> j) & 1 for j in range(self.qubit_count))

    def index_of(self, bits) -> int:
        bits = tuple(bits)
        if len(bits) != self.qubit_count or any(b not in (0, 1) for b in bits):
            raise EncodingError(f"need {self.qubit_count} bits, got {bits!r}")
        return sum(b << j for j, b in enumerate(bits))


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string; axes[n] is the operator on qubit n."""

    coefficient: complex
    axes: str

    def __post_init__(self):
        if not isinstance(self.axes, str) or self.axes.strip(AXES):
            raise EncodingError(f"axes string {self.axes!r} has characters outside IXYZ")


@dataclass(frozen=True)
class PauliSum:
    """Combined Pauli-string operator: pairwise-distinct axes, fixed register."""

    terms: tuple[PauliTerm, ...]
    qubit_count: int

    def __post_init__(self):
        seen = set()
        for t in self.terms:
            if len(t.axes) != self.qubit_count:
                raise EncodingError(
                    f"term {t.axes!r} does not span {self.qubit_count} qubits"
                )
            if t.axes in seen:
                raise EncodingError(f"duplicate term axes {t.axes!r}")
            seen.add(t.axes)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def coefficient_of(self, axes: str) -> complex:
        for t in self.terms:
            if t.axes == axes:
                return t.coefficient
        return 0j


def _code_to_axes(code: int, q: int) -> str:
    return "".join(AXES[(code >> (2 * n)) & 3] for n in range(q))


def _axes_to_code(axes: str) -> int:
    code = 0
    for n, c in enumerate(axes):
        code |= AXES.index(c) << (2 * n)
    return code


def axes_to_masks(axes: str) -> tuple[int, int, int]:
    """Bit masks (x_mask, y_mask, z_mask) of the qubits carrying X, Y, Z."""
    mx = my = mz = 0
    for n, c in enumerate(axes):
        if c == "X":
            mx |= 1 << n
        elif c == "Y":
            my |= 1 << n
        elif c == "Z":
            mz |= 1 << n
    return mx, my, mz


def _expand_entries(j_arr: np.ndarray, k_arr: np.ndarray, q: int):
    """Vectorized two-term-per-qubit expansion for a batch of index pairs.

    Returns (codes, factors) of shape (n_entries, 2**q): base-4 axis codes
    and the exact +-2**-q / +-i*2**-q selector products, before entry values
    are multiplied in.
    """
    sel = np.arange(1 << q, dtype=np.int64)
    codes = np.zeros((j_arr.shape[0], 1 << q), dtype=np.int64)
    factors = np.ones((j_arr.shape[0], 1 << q), dtype=np.complex128)
    for n in range(q):
        bj = (j_arr >> n) & 1
        bk = (k_arr >> n) & 1
        pick = ((sel >> n) & 1).astype(bool)
        a0 = _AXIS0[bj, bk][:, None]
        a1 = _AXIS1[bj, bk][:, None]
        c0 = _COEF0[bj, bk][:, None]
        c1 = _COEF1[bj, bk][:, None]
        codes += np.where(pick[None, :], a1, a0) << (2 * n)
        factors *= np.where(pick[None, :], c1, c0)
    return codes, factors


def index_pair_to_terms(j: int, k: int, encoding: BitEncoding) -> list[PauliTerm]:
    """All 2**q Pauli terms of the elementary operator |j><k|.

    Coefficients are exact: +-2**-q or +-i * 2**-q.  Summing the terms as
    matrices reproduces the single-one matrix with 1 at row j, column k.
    """
    q = encoding.qubit_count
    size = 1 << q
    if not (0 <= j < size and 0 <= k < size):
        raise EncodingError(f"index pair ({j},{k}) outside register of {q} qubits")
    codes, factors = _expand_entries(
        np.array([j], dtype=np.int64), np.array([k], dtype=np.int64), q
    )
    return [
        PauliTerm(complex(factors[0, s]), _code_to_axes(int(codes[0, s]), q))
        for s in range(size)
    ]


def _gershgorin_upper(data: np.ndarray) -> float:
    radii = np.sum(np.abs(data), axis=1) - np.abs(np.diagonal(data))
    return float(np.max(np.diagonal(data).real + radii))


def _entry_order(matrix: HermitianMatrix, q: int, padding: str):
    """Row-major nonzero entries, then any padded diagonal entries.

    Returns (j, k, value) arrays; raises under the "reject" policy whenever
    the dimension falls short of the full register.
    """
    data = matrix.data
    dim = matrix.dimension
    size = 1 << q
    if dim > size:
        raise EncodingError(f"matrix dimension {dim} exceeds 2**{q} = {size}")
    jj, kk = np.nonzero(data)
    vals = data[jj, kk]
    if dim < size:
        if padding == "reject":
            raise EncodingError(
                f"matrix dimension {dim} is below the register size {size} and the "
                f"padding policy 'reject' forbids implicit extension"
            )
        if padding != "extend":
            raise EncodingError(f"unknown padding policy {padding!r}")
        pad_value = _gershgorin_upper(data) + 1.0
        pad_idx = np.arange(dim, size, dtype=np.int64)
        jj = np.concatenate([jj.astype(np.int64), pad_idx])
        kk = np.concatenate([kk.astype(np.int64), pad_idx])
        vals = np.concatenate([vals, np.full(size - dim, pad_value, dtype=np.complex128)])
    return jj.astype(np.int64), kk.astype(np.int64), vals


def _sum_from_accumulator(acc: np.ndarray, q: int, scale: float) -> PauliSum:
    threshold = DROP_RELATIVE_TOL * scale
    keep = np.nonzero(np.abs(acc) > threshold)[0]
    pairs = sorted(
        ((_code_to_axes(int(c), q), acc[int(c)]) for c in keep), key=lambda p: p[0]
    )
    return PauliSum(tuple(PauliTerm(complex(v), a) for a, v in pairs), q)


def encode_matrix(
    matrix: HermitianMatrix, encoding: BitEncoding, padding: str = "reject"
) -> PauliSum:
    """Encode a Hermitian matrix as a combined Pauli sum over the register.

    Reconstructing the result reproduces the (possibly padded) input to
    1e-10 entrywise; like terms are combined and coefficients below
    1e-14 * max|entry| are dropped.  ``padding`` is "reject" (dimension must
    equal 2**q) or "extend" (missing diagonal filled with a Gershgorin upper
    bound plus one, keeping padded states out of the groundstate).
    """
    q = encoding.qubit_count
    if q > MAX_COMBINE_QUBITS:
        raise EncodingError(f"combined encoding guard: {q} qubits exceeds {MAX_COMBINE_QUBITS}")
    jj, kk, vals = _entry_order(matrix, q, padding)
    size = 4**q
    acc = np.zeros(size, dtype=np.complex128)
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if vals.size:
        codes, factors = _expand_entries(jj, kk, q)
        weights = vals[:, None] * factors
        # bincount accumulates in entry order, one addition per slot per
        # entry, matching the streamed combine sequence addition for addition
        flat = codes.ravel()
        acc.real = np.bincount(flat, weights=weights.real.ravel(), minlength=size)
        acc.imag = np.bincount(flat, weights=weights.imag.ravel(), minlength=size)
    return _sum_from_accumulator(acc, q, scale)


def stream_entry_terms(
    matrix: HermitianMatrix, encoding: BitEncoding, padding: str = "reject"
) -> Iterator[PauliTerm]:
    """Yield the per-entry Pauli terms one at a time, zeros skipped.

    Entries stream in the same order the batch encoder uses (row-major, then
    padded diagonal), and each entry contributes its 2**q terms in selector
    order.  Every coefficient is the entry value scaled by an exact power of
    two times a unit phase, so feeding the stream through combine_terms
    reproduces encode_matrix exactly, without ever holding the full table.
    """
    q = encoding.qubit_count
    jj, kk, vals = _entry_order(matrix, q, padding)
    for e in range(vals.shape[0]):
        j = int(jj[e])
        k = int(kk[e])
        # selector-order doubling; every step scales by an exact power of two
        # (times a unit phase), so the products carry no rounding
        axes = [""]
        coefs = [complex(vals[e])]
        for n in range(q):
            bj = (j >> n) & 1
            bk = (k >> n) & 1
            a0 = _CH_AXIS0[bj][bk]
            a1 = _CH_AXIS1[bj][bk]
            c0 = _PY_COEF0[bj][bk]
            c1 = _PY_COEF1[bj][bk]
            axes = [s + a0 for s in axes] + [s + a1 for s in axes]
            coefs = [c * c0 for c in coefs] + [c * c1 for c in coefs]
        for s in range(len(axes)):
            yield PauliTerm(coefs[s], axes[s])


def entry_scale(matrix: HermitianMatrix, encoding: BitEncoding, padding: str = "reject") -> float:
    """Largest entry magnitude the encoder will see, padding included.

    Passing this as ``reference_scale`` to combine_terms makes the streaming
    path use the identical drop threshold as encode_matrix.
    """
    _, _, vals = _entry_order(matrix, encoding.qubit_count, padding)
    return float(np.max(np.abs(vals))) if vals.size else 0.0


def combine_terms(
    terms: Iterable[PauliTerm], qubit_count: int, reference_scale: float | None = None
) -> PauliSum:
    """Combine like terms from a stream into a canonical PauliSum.

    ``reference_scale`` sets the drop threshold (1e-14 * scale) and should be
    max|entry| of the source matrix for exact agreement with encode_matrix;
    when omitted it is recovered as max|coefficient| * 2**q.
    """
    q = qubit_count
    if q > MAX_COMBINE_QUBITS:
        raise EncodingError(f"combined encoding guard: {q} qubits exceeds {MAX_COMBINE_QUBITS}")
    acc = np.zeros(4**q, dtype=np.complex128)
    codes: dict[str, int] = {}
    max_coef = 0.0
    track_scale = reference_scale is None
    for t in terms:
        code = codes.get(t.axes)
        if code is None:
            if len(t.axes) != q:
                raise EncodingError(f"stream term {t.axes!r} does not span {q} qubits")
            code = _axes_to_code(t.axes)
            codes[t.axes] = code
        acc[code] += t.coefficient
        if track_scale:
            mag = abs(t.coefficient)
            if mag > max_coef:
                max_coef = mag
    scale = reference_scale if reference_scale is not None else max_coef * (1 << q)
    return _sum_from_accumulator(acc, q, scale)


def reconstruct_dense(pauli_sum: PauliSum) -> np.ndarray:
    """Dense complex matrix of the operator (test oracle and exact-mode cache)."""
    q = pauli_sum.qubit_count
    if q > MAX_RECONSTRUCT_QUBITS:
        raise EncodingError(
            f"reconstruction guard: {q} qubits exceeds {MAX_RECONSTRUCT_QUBITS}"
        )
    size = 1 << q
    out = np.zeros((size, size), dtype=np.complex128)
    cols = np.arange(size, dtype=np.int64)
    for term in pauli_sum.terms:
        mx, my, mz = axes_to_masks(term.axes)
        flip = cols ^ (mx | my)
        signs = 1 - 2 * ((np.bitwise_count((cols & (mz | my)).astype(np.uint64)) & 1)).astype(
            np.int64
        )
        phase = (1.0, 1.0j, -1.0, -1.0j)[bin(my).count("1") & 3]
        out[flip, cols] += term.coefficient * phase * signs
    return out


def to_text(pauli_sum: PauliSum) -> str:
    """One term per line: ``<re> <im> <axes>``, axes position 0 = qubit 0."""
    lines = [
        f"{t.coefficient.real!r} {t.coefficient.imag!r} {t.axes}"
        for t in pauli_sum.terms
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def from_text(text: str, qubit_count: int | None = None) -> PauliSum:
    terms = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise EncodingError(f"line {lineno}: expected '<re> <im> <axes>', got {line!r}")
        re_s, im_s, axes = parts
        terms.append(PauliTerm(complex(float(re_s), float(im_s)), axes))
    if not terms and qubit_count is None:
        raise EncodingError("empty Pauli-sum text needs an explicit qubit count")
    q = qubit_count if qubit_count is not None else len(terms[0].axes)
    return PauliSum(tuple(terms), q)
