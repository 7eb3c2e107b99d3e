"""End-to-end reconstruction: test states, noise synthesis, the full
measurements-to-state pipeline, and a direct-minimization baseline.

The estimator is exact, not iterative: assemble the candidate matrix from
the measured means, diagonalize, project the spectrum onto the probability
simplex, rebuild.  The baseline minimizer recovers the same optimum by
gradient descent over a triangular factorization and exists only for
benchmark comparison.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .pauli import (MeasurementRecord, MeasurementSet, all_pauli_expectations,
                    assemble_mu_pauli, parse_pauli_label, pauli_labels)
from .projection import (ProjectionResult, compose_state, hermitian_eigensystem,
                         hs_distance_sq, project_to_simplex, residual_objective)

MAX_QUBITS = 12
DEFAULT_PURITY = 0.9
DEFAULT_VARIANCE = 1e-4


@dataclass(frozen=True)
class NoiseModel:
    """Additive Gaussian noise on each averaged expectation value.

    One draw of variance `variance` per non-identity operator; the identity
    mean is pinned to 1 and never noisy.  `seed` feeds a PCG64 generator
    (numpy default_rng) drawing in canonical label order, so identical
    seeds reproduce measurement sets bit for bit.
    """

    variance: float
    seed: int

    def __post_init__(self):
        if not self.variance > 0:
            raise ValueError("variance must be positive")


@dataclass(frozen=True)
class StageTimings:
    """Wall-clock seconds per reconstruction stage."""

    basis_change: float
    eigensystem: float
    projection: float
    reconstruction: float

    @property
    def total(self) -> float:
        return (self.basis_change + self.eigensystem + self.projection
                + self.reconstruction)


@dataclass(frozen=True)
class ReconstructionReport:
    rho: np.ndarray
    projection: ProjectionResult
    residual: float
    timings: StageTimings


@dataclass(frozen=True)
class BaselineResult:
    """Outcome of the direct minimizer; non-convergence is flagged, not fatal."""

    rho: np.ndarray
    objective: float
    iterations: int
    gradient_norm: float
    converged: bool


def validate_density_matrix(rho: np.ndarray, herm_tol: float = 1e-12,
                            trace_tol: float = 1e-10,
                            eig_tol: float = 1e-12) -> None:
    """Raise unless rho is Hermitian, trace one and PSD within tolerance."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    asym = float(np.abs(rho - rho.conj().T).max())
    if asym > herm_tol:
        raise ValueError(f"not Hermitian: max asymmetry {asym:.3e}")
    trace_err = abs(complex(rho.trace()) - 1.0)
    if trace_err > trace_tol:
        raise ValueError(f"trace deviates from 1 by {trace_err:.3e}")
    smallest = float(np.linalg.eigvalsh(rho)[0])
    if smallest < -eig_tol:
        raise ValueError(f"negative eigenvalue {smallest:.3e}")


def random_pure_state(qubits: int, seed) -> np.ndarray:
    """Haar-random state vector: normalized complex Gaussian amplitudes."""
    if not 1 <= qubits <= MAX_QUBITS:
        raise ValueError(f"qubits must be in [1, {MAX_QUBITS}], got {qubits}")
    rng = np.random.default_rng(seed)
    d = 2 ** qubits
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return psi / np.linalg.norm(psi)


def mix_with_identity(psi: np.ndarray, purity: float) -> np.ndarray:
    """rho = purity * |psi><psi| + (1 - purity) * I/d."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"state vector has norm {norm!r}, expected 1")
    if not 0.0 <= purity <= 1.0:
        raise ValueError(f"purity must be in [0, 1], got {purity}")
    d = psi.size
    return purity * np.outer(psi, psi.conj()) + (1.0 - purity) / d * np.eye(d)


def _measurement_set_from_means(qubits: int, means: np.ndarray,
                                variance: float) -> MeasurementSet:
    records = [
        MeasurementRecord(parse_pauli_label(lbl), float(mean), shots=1)
        for lbl, mean in zip(pauli_labels(qubits), means)
    ]
    return MeasurementSet(qubits, records, variance)


def simulate_measurements(rho0: np.ndarray, noise: NoiseModel) -> MeasurementSet:
    """Noisy informationally complete Pauli measurement of a known state.

    Every non-identity mean is Tr[P_i rho0] plus an independent Gaussian
    draw of the model's variance; the identity mean is exactly 1 and shots
    are recorded as 1 (the variance already reflects averaging).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    validate_density_matrix(rho0)
    d = rho0.shape[0]
    qubits = d.bit_length() - 1
    if 2 ** qubits != d:
        raise ValueError(f"dimension {d} is not a power of two")
    means = all_pauli_expectations(rho0)
    rng = np.random.default_rng(noise.seed)
    means = means + 0.0  # writable copy
    means[1:] += rng.normal(0.0, np.sqrt(noise.variance), d * d - 1)
    means[0] = 1.0
    return _measurement_set_from_means(qubits, means, noise.variance)


def noiseless_measurements(rho0: np.ndarray) -> MeasurementSet:
    """Exact expectation values of a known state, variance recorded as 0."""
    rho0 = np.asarray(rho0, dtype=complex)
    validate_density_matrix(rho0)
    d = rho0.shape[0]
    qubits = d.bit_length() - 1
    if 2 ** qubits != d:
        raise ValueError(f"dimension {d} is not a power of two")
    means = all_pauli_expectations(rho0) + 0.0
    means[0] = 1.0
    return _measurement_set_from_means(qubits, means, 0.0)


def reconstruct(measurements: MeasurementSet) -> ReconstructionReport:
    """Full maximum-likelihood reconstruction with per-stage timings.

    Stages: candidate assembly from the means (basis change), Hermitian
    eigendecomposition, simplex projection of the spectrum, and state
    reconstruction in the eigenbasis.
    """
    t0 = time.perf_counter()
    mu = assemble_mu_pauli(measurements)
    t1 = time.perf_counter()
    spectrum = hermitian_eigensystem(mu)
    t2 = time.perf_counter()
    projection = project_to_simplex(spectrum.eigenvalues)
    t3 = time.perf_counter()
    rho = compose_state(spectrum, projection)
    t4 = time.perf_counter()
    residual = residual_objective(measurements, rho)
    timings = StageTimings(t1 - t0, t2 - t1, t3 - t2, t4 - t3)
    return ReconstructionReport(rho, projection, residual, timings)


def clip_and_renormalize(mu: np.ndarray) -> np.ndarray:
    """Naive physicality fix: zero the negative eigenvalues, rescale to trace 1.

    Biased compared to the simplex projection; used as a comparison point.
    """
    spectrum = hermitian_eigensystem(mu)
    clipped = np.maximum(spectrum.eigenvalues, 0.0)
    total = clipped.sum()
    if not total > 0:
        raise ValueError("candidate has no positive eigenvalues")
    V = spectrum.eigenvectors
    rho = (V * (clipped / total)) @ V.conj().T
    return (rho + rho.conj().T) / 2


def _triangular_root(rho: np.ndarray) -> np.ndarray:
    """Lower-triangular T with T^H T = rho (rho positive definite)."""
    d = rho.shape[0]
    flip = np.arange(d - 1, -1, -1)
    # Cholesky of the index-reversed matrix gives the reversed factor
    L = np.linalg.cholesky(rho[np.ix_(flip, flip)])
    return L.conj().T[np.ix_(flip, flip)]


def baseline_minimize(measurements: MeasurementSet, max_iters: int = 20000,
                      tol: float = 1e-6) -> BaselineResult:
    """Direct least-squares fit of the candidate matrix, for benchmarks.

    Parametrizes rho = T^H T / Tr(T^H T) over an unconstrained complex
    lower-triangular T and minimizes the squared Hilbert-Schmidt distance
    to the candidate by gradient descent with backtracking line search.
    Stops when the gradient norm drops below `tol` or after `max_iters`
    steps; the convergence flag records which.
    """
    mu = assemble_mu_pauli(measurements)
    return baseline_minimize_candidate(mu, max_iters=max_iters, tol=tol)


def baseline_minimize_candidate(mu: np.ndarray, max_iters: int = 20000,
                                tol: float = 1e-6) -> BaselineResult:
    """Same as baseline_minimize but starting from a candidate matrix."""
    mu = np.asarray(mu, dtype=complex)
    d = mu.shape[0]
    start = clip_and_renormalize(mu)
    # full-rank jitter so the triangular factorization exists
    start = (1.0 - 1e-6) * start + 1e-6 / d * np.eye(d)
    T = _triangular_root(start)

    def objective_of(T):
        gram = T.conj().T @ T
        rho = gram / gram.trace().real
        diff = mu - rho
        return float(np.sum(diff.real ** 2 + diff.imag ** 2)), rho

    f, rho = objective_of(T)
    step = 0.25
    iterations = 0
    grad_norm = np.inf
    for iterations in range(1, max_iters + 1):
        scale = (T.conj().T @ T).trace().real
        diff = mu - rho
        inner = np.sum(diff.real * rho.real + diff.imag * rho.imag)
        K = (-2.0 / scale) * (diff - inner * np.eye(d))
        grad = 2.0 * np.tril(T @ K)
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= tol:
            break
        accepted = False
        for _ in range(60):
            T_new = T - step * grad
            f_new, rho_new = objective_of(T_new)
            if f_new <= f - 1e-4 * step * grad_norm ** 2:
                T, f, rho = T_new, f_new, rho_new
                step = min(step * 1.5, 1e6)
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break  # step underflow: no further progress possible

    rho = (rho + rho.conj().T) / 2
    return BaselineResult(rho, f, iterations, grad_norm, grad_norm <= tol)
