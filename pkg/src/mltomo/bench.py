"""Benchmark harness: reconstruction runtime versus qubit count, as CSV.

Three methods mirror the runtime comparison the estimator is built around:
the spectrum projection alone, the projection plus the Pauli basis change,
and the direct gradient-descent baseline (much slower, capped at few
qubits).  Timings per stage are medians over repeated runs on a fresh
random near-pure state per trial.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .pauli import assemble_mu_pauli
from .pipeline import (DEFAULT_PURITY, DEFAULT_VARIANCE, NoiseModel,
                       baseline_minimize_candidate, mix_with_identity,
                       random_pure_state, reconstruct, simulate_measurements)
from .projection import (compose_state, hermitian_eigensystem, hs_distance_sq,
                         project_to_simplex)

METHOD_PROJECTION = "projection-only"
METHOD_FULL = "projection-plus-basis-change"
METHOD_BASELINE = "baseline-minimizer"
ALL_METHODS = (METHOD_PROJECTION, METHOD_FULL, METHOD_BASELINE)

BASELINE_MAX_QUBITS = 5
CSV_HEADER = "method,qubits,d,trial,t_basis,t_eig,t_proj,t_total,objective,converged"


@dataclass(frozen=True)
class BenchmarkRow:
    method: str
    qubits: int
    d: int
    trial: int
    t_basis: float
    t_eig: float
    t_proj: float
    t_total: float
    objective: float
    converged: bool


def _trial_state(seed: int, qubits: int, trial: int, purity: float,
                 variance: float):
    """Deterministic per-trial data, independent of scheduling order."""
    root = np.random.SeedSequence(entropy=(seed, qubits, trial))
    state_seed, noise_seed = root.spawn(2)
    psi = random_pure_state(qubits, state_seed)
    rho0 = mix_with_identity(psi, purity)
    noise = NoiseModel(variance, noise_seed)
    return simulate_measurements(rho0, noise)


def _time_projection_only(mu: np.ndarray, repetitions: int):
    t_eig, t_proj, t_form, totals, dist = [], [], [], [], 0.0
    for _ in range(repetitions):
        t0 = time.perf_counter()
        spectrum = hermitian_eigensystem(mu)
        t1 = time.perf_counter()
        projection = project_to_simplex(spectrum.eigenvalues)
        t2 = time.perf_counter()
        compose_state(spectrum, projection)
        t3 = time.perf_counter()
        t_eig.append(t1 - t0)
        t_proj.append(t2 - t1)
        t_form.append(t3 - t2)
        totals.append(t3 - t0)
        dist = projection.distance_sq
    return (0.0, float(np.median(t_eig)), float(np.median(t_proj)),
            float(np.median(totals)), dist)


def _time_full(measurements, repetitions: int):
    # t_total is the wall time of the complete reconstruct() call: the four
    # algorithm stages plus the report's residual evaluation, all O(d**3)
    t_basis, t_eig, t_proj, totals, dist = [], [], [], [], 0.0
    for _ in range(repetitions):
        t0 = time.perf_counter()
        report = reconstruct(measurements)
        elapsed = time.perf_counter() - t0
        t = report.timings
        t_basis.append(t.basis_change)
        t_eig.append(t.eigensystem)
        t_proj.append(t.projection)
        totals.append(elapsed)
        dist = report.projection.distance_sq
    return (float(np.median(t_basis)), float(np.median(t_eig)),
            float(np.median(t_proj)), float(np.median(totals)), dist)


def run_benchmark(min_qubits: int = 1, max_qubits: int = 8, trials: int = 5,
                  methods=ALL_METHODS, *, purity: float = DEFAULT_PURITY,
                  variance: float = DEFAULT_VARIANCE, seed: int = 0,
                  repetitions: int = 3, jobs: int = 1,
                  baseline_max_qubits: int = BASELINE_MAX_QUBITS,
                  baseline_max_iters: int = 3000) -> list[BenchmarkRow]:
    """Measure reconstruction time per method, qubit count and trial.

    Returns rows ordered by (method, qubits, trial); identical seeds give
    identical rows except for the timing columns.  The baseline minimizer
    is skipped above `baseline_max_qubits`.
    """
    if not 1 <= min_qubits <= max_qubits <= 10:
        raise ValueError("need 1 <= min_qubits <= max_qubits <= 10")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    methods = tuple(methods)
    for m in methods:
        if m not in ALL_METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {ALL_METHODS}")
    sizes = range(min_qubits, max_qubits + 1)

    def run_trial(qubits: int, trial: int) -> list[BenchmarkRow]:
        measurements = _trial_state(seed, qubits, trial, purity, variance)
        d = 2 ** qubits
        out = []
        mu = None
        if METHOD_PROJECTION in methods or METHOD_BASELINE in methods:
            mu = assemble_mu_pauli(measurements)
        if METHOD_PROJECTION in methods:
            tb, te, tp, tt, obj = _time_projection_only(mu, repetitions)
            out.append(BenchmarkRow(METHOD_PROJECTION, qubits, d, trial,
                                    tb, te, tp, tt, obj, True))
        if METHOD_FULL in methods:
            tb, te, tp, tt, obj = _time_full(measurements, repetitions)
            out.append(BenchmarkRow(METHOD_FULL, qubits, d, trial,
                                    tb, te, tp, tt, obj, True))
        if METHOD_BASELINE in methods and qubits <= baseline_max_qubits:
            t0 = time.perf_counter()
            result = baseline_minimize_candidate(mu, max_iters=baseline_max_iters)
            elapsed = time.perf_counter() - t0
            objective = hs_distance_sq(mu, result.rho)
            out.append(BenchmarkRow(METHOD_BASELINE, qubits, d, trial,
                                    0.0, 0.0, 0.0, elapsed, objective,
                                    result.converged))
        return out

    # warm up compiled kernels and cached tables outside the timed region
    warmup_trial = 0x7FFFFFFF
    _trial_state(seed, min_qubits, warmup_trial, purity, variance)
    reconstruct(_trial_state(seed, max_qubits, warmup_trial, purity, variance))

    tasks = [(q, t) for q in sizes for t in range(trials)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(lambda qt: run_trial(*qt), tasks))
    else:
        chunks = [run_trial(q, t) for q, t in tasks]

    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (ALL_METHODS.index(r.method), r.qubits, r.trial))
    return rows


def format_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.method},{r.qubits},{r.d},{r.trial},{r.t_basis!r},"
            f"{r.t_eig!r},{r.t_proj!r},{r.t_total!r},{r.objective!r},"
            f"{'true' if r.converged else 'false'}")
    return "\n".join(lines) + "\n"


def write_benchmark_csv(path, rows) -> None:
    with open(path, "w") as fh:
        fh.write(format_csv(rows))


def fit_loglog_slope(rows, method: str = METHOD_FULL) -> float:
    """Least-squares slope of log(median t_total) against log(d)."""
    per_size: dict[int, list[float]] = {}
    for r in rows:
        if r.method == method:
            per_size.setdefault(r.d, []).append(r.t_total)
    if len(per_size) < 2:
        raise ValueError("need at least two distinct sizes to fit a slope")
    dims = sorted(per_size)
    medians = [float(np.median(per_size[d])) for d in dims]
    slope = np.polyfit(np.log(dims), np.log(medians), 1)[0]
    return float(slope)
