"""Spectral core: eigendecomposition, simplex projection, and distances.

Finding the closest density matrix to a trace-one Hermitian candidate in
Hilbert-Schmidt norm reduces to projecting its eigenvalue vector onto the
probability simplex {p >= 0, sum p = 1}.  The projection either zeroes an
eigenvalue or shifts it by one common amount, the zeros sit at the tail of
the descending-sorted spectrum, and the retained prefix is the largest
feasible one, so a single backward sweep with an accumulator finds the
optimum in O(d) after sorting.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pauli import MeasurementSet, all_pauli_expectations

SUM_ATOL = 1e-6
ORACLE_MAX_DIM = 20


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenvalues sorted descending with matching orthonormal eigenvectors.

    Column k of `eigenvectors` belongs to eigenvalues[k].
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class ProjectionResult:
    """Outcome of projecting a real vector onto the probability simplex.

    lambdas:      projected values, same order as the input
    support:      length of the retained prefix (descending order); entries
                  past it are exactly zero
    shift:        the common amount added to every retained entry (the
                  accumulator value a/i at loop exit)
    distance_sq:  squared Euclidean distance between input and projection
    """

    lambdas: np.ndarray
    support: int
    shift: float
    distance_sq: float


def hermitian_eigensystem(matrix: np.ndarray, herm_tol: float = 1e-10) -> EigenSpectrum:
    """Eigenvalues (descending) and eigenvectors of a Hermitian matrix.

    Delegates to LAPACK through numpy; the contract is the reconstruction
    residual, not the method.  Raises if the input deviates from Hermitian
    by more than `herm_tol` per entry, or if the solver fails to converge.
    """
    M = np.asarray(matrix, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    asym = float(np.abs(M - M.conj().T).max())
    if asym > herm_tol:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
    w, V = np.linalg.eigh(M)  # ascending; LinAlgError on convergence failure
    return EigenSpectrum(np.ascontiguousarray(w[::-1]),
                         np.ascontiguousarray(V[:, ::-1]))


def _project_descending(values: np.ndarray) -> tuple[np.ndarray, int, float]:
    """Backward accumulator sweep; `values` must be sorted nonincreasing.

    Walks i = d, d-1, ... collecting excluded mass in `a`: while the
    smallest still-active entry plus a/i is negative, zero it and fold it
    into a.  The survivors all receive the final a/i.  A tie
    (values[i-1] + a/i == 0) keeps the index active; the zero emerges
    naturally.  Preserves the input's sum, which must be positive.
    """
    d = len(values)
    lambdas = np.array(values, dtype=float)
    a = 0.0
    i = d
    while values[i - 1] + a / i < 0.0:
        lambdas[i - 1] = 0.0
        a += values[i - 1]
        i -= 1
    shift = a / i
    lambdas[:i] = values[:i] + shift
    return lambdas, i, shift


def project_to_simplex(mu: np.ndarray) -> ProjectionResult:
    """Euclidean projection of a sorted near-unit-sum vector onto the simplex.

    Strict entry point: the input must already be sorted nonincreasing and
    sum to 1 within 1e-6.  Use normalize_then_project for arbitrary input.
    """
    arr = np.asarray(mu, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("input must be a nonempty 1-D vector")
    if np.any(np.diff(arr) > 0):
        raise ValueError("input must be sorted in nonincreasing order")
    total = float(arr.sum())
    if abs(total - 1.0) > SUM_ATOL:
        raise ValueError(
            f"input sums to {total!r}, not 1; use normalize_then_project")
    lambdas, support, shift = _project_descending(arr)
    distance_sq = float(np.sum((lambdas - arr) ** 2))
    return ProjectionResult(lambdas, support, shift, distance_sq)


def normalize_then_project(x: np.ndarray, target_sum: float = 1.0) -> ProjectionResult:
    """Project an arbitrary real vector onto {p >= 0, sum p = target_sum}.

    Sorts a copy descending, applies the uniform pre-shift
    (target_sum - sum(x)) / d, runs the accumulator sweep, and restores the
    caller's order.  The pre-shift does not move the projection: it has the
    form max(x_i - theta, 0) with theta fixed by the sum constraint, and a
    uniform shift of the input only re-centers theta.

    `shift` and `distance_sq` refer to the sum-corrected sorted input.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("input must be a nonempty 1-D vector")
    if not target_sum > 0:
        raise ValueError("target_sum must be positive")
    order = np.argsort(-arr, kind="stable")
    shifted = arr[order] + (target_sum - arr.sum()) / arr.size
    lambdas_sorted, support, shift = _project_descending(shifted)
    distance_sq = float(np.sum((lambdas_sorted - shifted) ** 2))
    lambdas = np.empty_like(lambdas_sorted)
    lambdas[order] = lambdas_sorted
    return ProjectionResult(lambdas, support, shift, distance_sq)


@lru_cache(maxsize=8)
def _subset_tables(d: int):
    """Membership matrix, sizes and smallest member value index per subset."""
    masks = np.arange(1, 1 << d, dtype=np.int64)
    members = ((masks[:, None] >> np.arange(d)) & 1).astype(np.int8)
    sizes = members.sum(axis=1, dtype=np.int64)
    # input is sorted descending, so the smallest member of a subset is the
    # highest set index
    last_index = (members * np.arange(1, d + 1)).max(axis=1) - 1
    members.flags.writeable = False
    sizes.flags.writeable = False
    last_index.flags.writeable = False
    return members, sizes, last_index


def oracle_subset_search(mu: np.ndarray) -> ProjectionResult:
    """Exhaustive reference for project_to_simplex, d <= 20.

    Tries every nonempty subset of indices as the support: each gets the
    uniform shift (1 - subset sum) / |subset|, infeasible subsets (some
    member pushed below zero) are skipped, and the feasible subset with the
    smallest squared distance wins, preferring larger supports on ties.
    Cost grows as 2**d; intended as a test oracle only.
    """
    arr = np.asarray(mu, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("input must be a nonempty 1-D vector")
    d = arr.size
    if d > ORACLE_MAX_DIM:
        raise ValueError(
            f"subset oracle is limited to d <= {ORACLE_MAX_DIM}, got {d}")
    if np.any(np.diff(arr) > 0):
        raise ValueError("input must be sorted in nonincreasing order")
    if abs(float(arr.sum()) - 1.0) > SUM_ATOL:
        raise ValueError("input must sum to 1 within tolerance")

    members, sizes, last_index = _subset_tables(d)
    subset_sums = members @ arr
    shifts = (1.0 - subset_sums) / sizes
    feasible = arr[last_index] + shifts >= 0.0
    sq = arr ** 2
    outside_sq = sq.sum() - members @ sq
    distances = sizes * shifts ** 2 + outside_sq

    candidates = np.flatnonzero(feasible)
    ranking = np.lexsort((-sizes[candidates], distances[candidates]))
    best = candidates[ranking[0]]
    chosen = members[best].astype(bool)
    lambdas = np.where(chosen, arr + shifts[best], 0.0)
    return ProjectionResult(lambdas, int(sizes[best]), float(shifts[best]),
                            float(distances[best]))


def compose_state(spectrum: EigenSpectrum, projection: ProjectionResult) -> np.ndarray:
    """Density matrix sum_k lambda_k |v_k><v_k| over the retained support."""
    s = projection.support
    V = spectrum.eigenvectors[:, :s]
    rho = (V * projection.lambdas[:s]) @ V.conj().T
    return (rho + rho.conj().T) / 2


def nearest_density(mu: np.ndarray) -> tuple[np.ndarray, ProjectionResult]:
    """Closest density matrix to a trace-one Hermitian candidate, 2-norm.

    Diagonalizes the candidate, projects its spectrum onto the simplex, and
    rebuilds in the eigenbasis.  Returns the state and the projection
    details; the squared distance of the two matrices equals
    projection.distance_sq.
    """
    spectrum = hermitian_eigensystem(mu)
    projection = project_to_simplex(spectrum.eigenvalues)
    rho = compose_state(spectrum, projection)
    trace_err = abs(rho.trace().real - 1.0)
    if trace_err > 1e-10:
        raise ValueError(f"projected state has trace error {trace_err:.3e}")
    return rho, projection


def hs_distance_sq(A: np.ndarray, B: np.ndarray) -> float:
    """Squared Hilbert-Schmidt distance sum_ij |A_ij - B_ij|**2."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    diff = A - B
    return float(np.sum(diff.real ** 2 + diff.imag ** 2))


def residual_objective(measurements: MeasurementSet, rho: np.ndarray) -> float:
    """Sum of squared residuals sum_i (m_i - Tr[P_i rho])**2.

    The quantity the maximum-likelihood state minimizes under Gaussian
    noise of equal variance; equals hs_distance_sq(mu, rho) / d when mu is
    assembled from the same measurements.
    """
    rho = np.asarray(rho)
    d = measurements.dimension
    if rho.shape != (d, d):
        raise ValueError(
            f"state has shape {rho.shape}, measurements need ({d}, {d})")
    predicted = all_pauli_expectations(rho)
    return float(np.sum((measurements.means - predicted) ** 2))
