"""Maximum-likelihood quantum state tomography, the fast way.

Under Gaussian noise of equal variance, the maximum-likelihood density
matrix for an informationally complete set of Pauli expectation values is
the Hilbert-Schmidt-nearest physical state to the linear-inversion
candidate matrix.  That projection costs one Hermitian eigendecomposition
plus a linear sweep over the spectrum, so full reconstructions stay
practical at hundreds of dimensions.
"""

from .pauli import (PAULI_1Q, MeasurementRecord, MeasurementSet, PauliString,
                    SparsePauliMatrix, all_pauli_expectations,
                    assemble_mu_general, assemble_mu_pauli, dense_matrix,
                    parse_pauli_label, pauli_expectation, pauli_labels,
                    sparse_matrix, verify_orthonormal)
from .projection import (EigenSpectrum, ProjectionResult, compose_state,
                         hermitian_eigensystem, hs_distance_sq,
                         nearest_density, normalize_then_project,
                         oracle_subset_search, project_to_simplex,
                         residual_objective)
from .pipeline import (DEFAULT_PURITY, DEFAULT_VARIANCE, BaselineResult,
                       NoiseModel, ReconstructionReport, StageTimings,
                       baseline_minimize, baseline_minimize_candidate,
                       clip_and_renormalize, mix_with_identity,
                       noiseless_measurements, random_pure_state, reconstruct,
                       simulate_measurements, validate_density_matrix)
from .bench import (ALL_METHODS, BenchmarkRow, fit_loglog_slope, run_benchmark,
                    write_benchmark_csv)

__version__ = "0.1.0"

__all__ = [
    "PAULI_1Q", "PauliString", "SparsePauliMatrix", "MeasurementRecord",
    "MeasurementSet", "parse_pauli_label", "pauli_labels", "sparse_matrix",
    "dense_matrix", "pauli_expectation", "all_pauli_expectations",
    "assemble_mu_pauli", "assemble_mu_general", "verify_orthonormal",
    "EigenSpectrum", "ProjectionResult", "hermitian_eigensystem",
    "project_to_simplex", "normalize_then_project", "oracle_subset_search",
    "nearest_density", "compose_state", "hs_distance_sq", "residual_objective",
    "NoiseModel", "StageTimings", "ReconstructionReport", "BaselineResult",
    "random_pure_state", "mix_with_identity", "simulate_measurements",
    "noiseless_measurements", "reconstruct", "baseline_minimize",
    "baseline_minimize_candidate", "clip_and_renormalize",
    "validate_density_matrix", "DEFAULT_PURITY", "DEFAULT_VARIANCE",
    "BenchmarkRow", "ALL_METHODS", "run_benchmark", "write_benchmark_csv",
    "fit_loglog_slope",
]
