"""Pauli-string operator bases and candidate-matrix assembly.

Measurement data lives in the orthonormal operator basis of n-qubit Pauli
strings, Tr[P_i P_j] = d * delta_ij with d = 2**n.  Averaged expectation
values over the complete basis condense into the trace-one Hermitian
candidate matrix mu = (1/d) sum_i m_i P_i, the linear-inversion view of
the measured state (generally not positive semidefinite).

Conventions: qubit 0 is the leftmost label character and acts on the most
significant bit of the computational-basis index; the canonical operator
order is lexicographic over labels (I < X < Y < Z).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterator, Sequence

import numpy as np

from ._kernels import accumulate_pauli_terms, phased_diagonal_sums

PAULI_CHARS = "IXYZ"

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (-i)**k for k mod 4; the unit phase of a string is (-i)**(number of Y factors)
_UNIT_PHASES = np.array([1, -1j, -1, 1j], dtype=complex)

# Tolerances guarding the assembled candidate matrix.  Comfortably above
# double-precision accumulation error at d <= 4096, far below any signal.
HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-9


@dataclass(frozen=True)
class PauliString:
    """Label over {I, X, Y, Z}**n identifying one basis operator."""

    factors: tuple[str, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a Pauli string needs at least one factor")
        for ch in self.factors:
            if ch not in PAULI_CHARS:
                raise ValueError(f"invalid Pauli factor {ch!r}")

    @property
    def qubits(self) -> int:
        return len(self.factors)

    @property
    def dimension(self) -> int:
        return 2 ** len(self.factors)

    @property
    def label(self) -> str:
        return "".join(self.factors)

    @property
    def x_mask(self) -> int:
        """Bit mask of qubits carrying X or Y (MSB = qubit 0)."""
        n = len(self.factors)
        return sum(1 << (n - 1 - k) for k, f in enumerate(self.factors) if f in "XY")

    @property
    def q_mask(self) -> int:
        """Bit mask of qubits carrying Y or Z (MSB = qubit 0)."""
        n = len(self.factors)
        return sum(1 << (n - 1 - k) for k, f in enumerate(self.factors) if f in "YZ")

    def __str__(self) -> str:
        return self.label


def parse_pauli_label(label: str) -> PauliString:
    """Parse a text label like "XZI" into a PauliString.

    Raises ValueError naming the first offending position if any character
    is outside {I, X, Y, Z}.
    """
    if not label:
        raise ValueError("empty Pauli label")
    for pos, ch in enumerate(label):
        if ch not in PAULI_CHARS:
            raise ValueError(f"invalid Pauli character {ch!r} at position {pos}")
    return PauliString(tuple(label))


def pauli_labels(qubits: int) -> Iterator[str]:
    """All 4**n labels on `qubits` qubits in canonical (lexicographic) order."""
    if qubits < 1:
        raise ValueError("qubits must be >= 1")
    for factors in itertools.product(PAULI_CHARS, repeat=qubits):
        yield "".join(factors)


@dataclass(frozen=True)
class SparsePauliMatrix:
    """Permutation-plus-phase form of a Pauli string.

    Row r has its single nonzero entry phases[r] in column columns[r]; the
    column map is an involution of {0, ..., d-1} and every phase is one of
    {+1, -1, +i, -i}.
    """

    dimension: int
    columns: np.ndarray
    phases: np.ndarray

    def dense(self) -> np.ndarray:
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        out[np.arange(self.dimension), self.columns] = self.phases
        return out


def sparse_matrix(p: PauliString) -> SparsePauliMatrix:
    """Sparse form of `p`: d nonzeros instead of the d*d dense array."""
    d = p.dimension
    rows = np.arange(d)
    x, q = p.x_mask, p.q_mask
    unit = _UNIT_PHASES[bin(x & q).count("1") & 3]
    signs = 1.0 - 2.0 * (np.bitwise_count(rows & q) & 1)
    return SparsePauliMatrix(d, rows ^ x, unit * signs)


def dense_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix of `p` via the n-fold Kronecker product."""
    return reduce(np.kron, (PAULI_1Q[f] for f in p.factors))


@dataclass(frozen=True)
class MeasurementRecord:
    """Averaged expectation value of one Pauli string."""

    operator: PauliString
    mean: float
    shots: int = 1

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if not np.isfinite(self.mean):
            raise ValueError("mean must be finite")


class MeasurementSet:
    """Informationally complete collection of averaged Pauli measurements.

    Exactly d**2 records, one per Pauli string on `qubits` qubits, plus the
    Gaussian noise variance of a single averaged value.  The all-identity
    record carries the trace constraint and must have mean exactly 1; it is
    fixed a priori, never measured.  Means outside [-1, 1] are accepted:
    noise can push them out and clipping would bias the estimate.

    Immutable after construction; `means` exposes the mean values in
    canonical label order as a read-only array.
    """

    def __init__(self, qubits: int, records: Sequence[MeasurementRecord],
                 variance: float):
        if qubits < 1:
            raise ValueError("qubits must be >= 1")
        if variance < 0:
            raise ValueError("variance must be >= 0")
        records = tuple(records)
        expected = 4 ** qubits
        by_label: dict[str, MeasurementRecord] = {}
        for rec in records:
            if rec.operator.qubits != qubits:
                raise ValueError(
                    f"record {rec.operator.label} has {rec.operator.qubits} "
                    f"qubits, expected {qubits}")
            lbl = rec.operator.label
            if lbl in by_label:
                raise ValueError(f"duplicate Pauli label {lbl}")
            by_label[lbl] = rec
        if len(by_label) != expected:
            for lbl in pauli_labels(qubits):
                if lbl not in by_label:
                    raise ValueError(f"incomplete Pauli basis: missing {lbl}")
        identity = "I" * qubits
        if by_label[identity].mean != 1.0:
            raise ValueError(
                f"identity record must have mean exactly 1, got "
                f"{by_label[identity].mean!r}")
        self.qubits = qubits
        self.variance = float(variance)
        self.records = records
        means = np.array([by_label[lbl].mean for lbl in pauli_labels(qubits)])
        means.flags.writeable = False
        self._means = means

    @property
    def dimension(self) -> int:
        return 2 ** self.qubits

    @property
    def means(self) -> np.ndarray:
        """Means in canonical label order (read-only)."""
        return self._means

    def __len__(self) -> int:
        return len(self.records)


@lru_cache(maxsize=8)
def _canonical_masks(qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """(x_mask, q_mask) arrays for all 4**n strings in canonical order."""
    idx = np.arange(4 ** qubits, dtype=np.int64)
    x = np.zeros_like(idx)
    q = np.zeros_like(idx)
    for k in range(qubits):
        digit = (idx >> (2 * (qubits - 1 - k))) & 3  # 0=I, 1=X, 2=Y, 3=Z
        bit = np.int64(1) << (qubits - 1 - k)
        x |= np.where((digit == 1) | (digit == 2), bit, 0)
        q |= np.where((digit == 2) | (digit == 3), bit, 0)
    x.flags.writeable = False
    q.flags.writeable = False
    return x, q


@lru_cache(maxsize=4)
def _sign_table(qubits: int) -> np.ndarray:
    """d x d parity table S[r, q] = (-1)**popcount(r & q)."""
    idx = np.arange(2 ** qubits, dtype=np.uint64)
    parity = np.bitwise_count(idx[:, None] & idx[None, :]) & 1
    table = np.where(parity == 0, 1.0, -1.0)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=8)
def _unit_phases(qubits: int) -> np.ndarray:
    """(-i)**(Y count) for every string in canonical order."""
    x, q = _canonical_masks(qubits)
    phases = _UNIT_PHASES[np.bitwise_count((x & q).astype(np.uint64)) & 3]
    phases.flags.writeable = False
    return phases


def pauli_expectation(p: PauliString, state: np.ndarray) -> float:
    """Tr(P state) evaluated through the sparse form in O(d) multiply-adds.

    `state` must be Hermitian so the trace is real; the imaginary part is
    checked against 1e-12 and discarded.
    """
    state = np.asarray(state)
    d = p.dimension
    if state.shape != (d, d):
        raise ValueError(
            f"state has shape {state.shape}, operator needs ({d}, {d})")
    sp = sparse_matrix(p)
    value = complex(np.sum(sp.phases * state[sp.columns, np.arange(d)]))
    if abs(value.imag) > 1e-12:
        raise ValueError(
            f"expectation has imaginary part {value.imag:.3e}; "
            "state is not Hermitian")
    return value.real


def all_pauli_expectations(state: np.ndarray, imag_tol: float = 1e-9) -> np.ndarray:
    """Tr(P_i state) for every string in canonical order, O(d**3) total.

    Returns a real array of length d**2; index 0 is the identity (the
    trace of `state`).
    """
    state = np.ascontiguousarray(state, dtype=complex)
    d = state.shape[0]
    if state.ndim != 2 or state.shape != (d, d):
        raise ValueError("state must be a square matrix")
    n = _qubit_count(d)
    x, q = _canonical_masks(n)
    raw = np.empty(d * d, dtype=complex)
    phased_diagonal_sums(state, x, q, _sign_table(n), raw)
    values = _unit_phases(n) * raw
    worst = np.max(np.abs(values.imag))
    if worst > imag_tol:
        raise ValueError(
            f"expectations have imaginary parts up to {worst:.3e}; "
            "state is not Hermitian")
    return values.real


def _qubit_count(dimension: int) -> int:
    n = dimension.bit_length() - 1
    if dimension < 2 or (1 << n) != dimension:
        raise ValueError(f"dimension {dimension} is not a power of two")
    return n


def assemble_mu_pauli(measurements: MeasurementSet) -> np.ndarray:
    """Candidate matrix mu = (1/d) sum_i m_i P_i by sparse accumulation.

    Each of the d**2 strings contributes its d nonzero entries, O(d**3)
    work in total.  The result is symmetrized to absorb accumulation
    rounding, then checked: Hermitian to 1e-12 per entry, trace 1 to 1e-9.
    """
    n = measurements.qubits
    d = measurements.dimension
    x, q = _canonical_masks(n)
    coefs = measurements.means * _unit_phases(n) / d
    mu = np.zeros((d, d), dtype=complex)
    accumulate_pauli_terms(mu, x, q, coefs, _sign_table(n))
    return _finalize_candidate(mu)


def assemble_mu_general(basis: Sequence[np.ndarray],
                        means: Sequence[float]) -> np.ndarray:
    """Candidate matrix from a general dense orthonormal Hermitian basis.

    Dense accumulation, O(d**4): d**2 basis elements of d**2 entries each.
    The basis must satisfy Tr[B_i B_j] = d * delta_ij; the offending pair
    and residual are reported otherwise.
    """
    stack = _stack_basis(basis)
    m, d = stack.shape[0], stack.shape[1]
    if len(means) != m:
        raise ValueError(f"{m} basis elements but {len(means)} means")
    if m != d * d:
        raise ValueError(
            f"basis must contain d**2 = {d * d} elements, got {m}")
    gram = np.einsum("aij,bji->ab", stack, stack)
    residual = np.abs(gram - d * np.eye(m))
    worst = float(residual.max())
    if worst > 1e-8:
        i, j = np.unravel_index(int(residual.argmax()), residual.shape)
        raise ValueError(
            f"basis is not orthonormal: |Tr[B_{i} B_{j}] - "
            f"{d if i == j else 0}| = {worst:.3e}")
    mu = np.tensordot(np.asarray(means, dtype=float), stack, axes=1) / d
    return _finalize_candidate(mu)


def verify_orthonormal(basis: Sequence[np.ndarray]) -> float:
    """Max deviation of Tr[B_i B_j] from d * delta_ij over all pairs."""
    stack = _stack_basis(basis)
    d = stack.shape[1]
    gram = np.einsum("aij,bji->ab", stack, stack)
    return float(np.abs(gram - d * np.eye(stack.shape[0])).max())


def _stack_basis(basis: Sequence[np.ndarray]) -> np.ndarray:
    mats = [np.asarray(b, dtype=complex) for b in basis]
    if not mats:
        raise ValueError("empty basis")
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError("basis elements must be square matrices")
    for k, mat in enumerate(mats):
        if mat.shape != shape:
            raise ValueError(
                f"basis element {k} has shape {mat.shape}, expected {shape}")
    return np.stack(mats)


def _finalize_candidate(mu: np.ndarray) -> np.ndarray:
    asym = float(np.abs(mu - mu.conj().T).max())
    if asym > HERMITICITY_ATOL:
        raise ValueError(
            f"assembled candidate is not Hermitian: max asymmetry {asym:.3e}")
    mu = (mu + mu.conj().T) / 2
    trace_err = abs(mu.trace().real - 1.0)
    if trace_err > TRACE_ATOL:
        raise ValueError(
            f"assembled candidate has trace error {trace_err:.3e}; "
            "the identity mean must be 1")
    return mu
