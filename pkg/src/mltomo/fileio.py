"""Plain-text file formats.

Measurement file:  header line `qubits <n> variance <v>`, then one line per
record `<label> <mean> <shots>`; `#` starts a comment line.
Density file:      line 1 `dim <d>`, then d rows of d entries `re,im`
separated by spaces.
Spectrum file:     one real per line, `#` comments.
Projection file:   `support <k>`, `shift <v>`, `distance_sq <v>`, then one
projected value per line.

Floats are written with repr, so every format round-trips exactly.
"""

from __future__ import annotations

import numpy as np

from .pauli import MeasurementRecord, MeasurementSet, parse_pauli_label
from .projection import ProjectionResult


def format_measurement_set(measurements: MeasurementSet) -> str:
    lines = [f"qubits {measurements.qubits} variance {measurements.variance!r}"]
    for rec in measurements.records:
        lines.append(f"{rec.operator.label} {rec.mean!r} {rec.shots}")
    return "\n".join(lines) + "\n"


def write_measurement_file(path, measurements: MeasurementSet) -> None:
    with open(path, "w") as fh:
        fh.write(format_measurement_set(measurements))


def read_measurement_file(path) -> MeasurementSet:
    qubits = None
    variance = None
    records = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if qubits is None:
                if len(fields) != 4 or fields[0] != "qubits" or fields[2] != "variance":
                    raise ValueError(
                        f"{path}: line {lineno}: expected header "
                        f"'qubits <n> variance <v>'")
                try:
                    qubits = int(fields[1])
                    variance = float(fields[3])
                except ValueError:
                    raise ValueError(
                        f"{path}: line {lineno}: malformed header values") from None
                continue
            if len(fields) != 3:
                raise ValueError(
                    f"{path}: line {lineno}: expected '<label> <mean> <shots>'")
            try:
                operator = parse_pauli_label(fields[0])
                mean = float(fields[1])
                shots = int(fields[2])
                records.append(MeasurementRecord(operator, mean, shots))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    if qubits is None:
        raise ValueError(f"{path}: empty measurement file")
    try:
        return MeasurementSet(qubits, records, variance)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def format_density_matrix(rho: np.ndarray) -> str:
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    lines = [f"dim {d}"]
    for row in rho:
        lines.append(" ".join(f"{z.real!r},{z.imag!r}" for z in row))
    return "\n".join(lines) + "\n"


def write_density_file(path, rho: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write(format_density_matrix(rho))


def read_density_file(path) -> np.ndarray:
    dim = None
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if dim is None:
                fields = line.split()
                if len(fields) != 2 or fields[0] != "dim":
                    raise ValueError(
                        f"{path}: line {lineno}: expected header 'dim <d>'")
                try:
                    dim = int(fields[1])
                except ValueError:
                    raise ValueError(
                        f"{path}: line {lineno}: malformed dimension") from None
                if dim < 1:
                    raise ValueError(f"{path}: line {lineno}: dim must be >= 1")
                continue
            entries = line.split()
            if len(entries) != dim:
                raise ValueError(
                    f"{path}: line {lineno}: expected {dim} entries, "
                    f"got {len(entries)}")
            row = []
            for entry in entries:
                parts = entry.split(",")
                if len(parts) != 2:
                    raise ValueError(
                        f"{path}: line {lineno}: entries must be 're,im'")
                try:
                    row.append(complex(float(parts[0]), float(parts[1])))
                except ValueError:
                    raise ValueError(
                        f"{path}: line {lineno}: malformed entry "
                        f"{entry!r}") from None
            rows.append(row)
    if dim is None:
        raise ValueError(f"{path}: empty density-matrix file")
    if len(rows) != dim:
        raise ValueError(f"{path}: expected {dim} rows, got {len(rows)}")
    return np.array(rows, dtype=complex)


def read_spectrum_file(path) -> np.ndarray:
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: not a number: {line!r}") from None
    if not values:
        raise ValueError(f"{path}: empty spectrum file")
    return np.array(values)


def format_projection_result(result: ProjectionResult) -> str:
    lines = [
        f"support {result.support}",
        f"shift {result.shift!r}",
        f"distance_sq {result.distance_sq!r}",
    ]
    lines.extend(f"{value!r}" for value in result.lambdas)
    return "\n".join(lines) + "\n"


def write_projection_file(path, result: ProjectionResult) -> None:
    with open(path, "w") as fh:
        fh.write(format_projection_result(result))
