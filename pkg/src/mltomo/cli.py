"""Command-line interface.

Subcommands: simulate, reconstruct, project, benchmark.  Every command is a
thin wrapper over the library; outputs match direct library calls byte for
byte.  Exit codes: 0 success, 1 usage, 2 I/O, 3 data validation,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench, fileio
from .pipeline import (DEFAULT_PURITY, DEFAULT_VARIANCE, NoiseModel,
                       mix_with_identity, random_pure_state,
                       simulate_measurements, reconstruct)
from .projection import normalize_then_project

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; we reserve 2 for I/O."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mltomo",
                     description="Maximum-likelihood quantum state tomography "
                                 "via simplex projection of the spectrum.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("simulate",
                       help="synthesize a noisy Pauli measurement file")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--purity", type=float, default=DEFAULT_PURITY,
                   help="weight of the random pure component (default %(default)s)")
    p.add_argument("--variance", type=float, default=DEFAULT_VARIANCE,
                   help="Gaussian noise variance per mean (default %(default)s)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="measurement file to write")

    p = sub.add_parser("reconstruct",
                       help="maximum-likelihood state from a measurement file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="density-matrix file to write")
    p.add_argument("--report", help="optional key-value report file")

    p = sub.add_parser("project",
                       help="nearest probability distribution to a spectrum file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--target-sum", type=float, default=1.0)
    p.add_argument("--out", required=True, help="projection file to write")

    p = sub.add_parser("benchmark",
                       help="reconstruction runtime versus qubit count, as CSV")
    p.add_argument("--min-qubits", type=int, default=1)
    p.add_argument("--max-qubits", type=int, default=8)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--methods", default=",".join(bench.ALL_METHODS),
                   help="comma-separated subset of: %(default)s")
    p.add_argument("--csv", required=True, help="CSV file to write")
    p.add_argument("--purity", type=float, default=DEFAULT_PURITY)
    p.add_argument("--variance", type=float, default=DEFAULT_VARIANCE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker threads for trials (timings get noisy above 1)")
    return parser


def _cmd_simulate(args, parser) -> int:
    if args.qubits < 1:
        parser.error(f"--qubits must be >= 1, got {args.qubits}")
    if not 0.0 <= args.purity <= 1.0:
        parser.error(f"--purity must be in [0, 1], got {args.purity}")
    if not args.variance > 0:
        parser.error(f"--variance must be positive, got {args.variance}")
    root = np.random.SeedSequence(args.seed)
    state_seed, noise_seed = root.spawn(2)
    psi = random_pure_state(args.qubits, state_seed)
    rho0 = mix_with_identity(psi, args.purity)
    measurements = simulate_measurements(rho0, NoiseModel(args.variance, noise_seed))
    fileio.write_measurement_file(args.out, measurements)
    return EXIT_OK


def _cmd_reconstruct(args, parser) -> int:
    measurements = fileio.read_measurement_file(args.infile)
    report = reconstruct(measurements)
    fileio.write_density_file(args.out, report.rho)
    if args.report:
        proj = report.projection
        t = report.timings
        lines = [
            f"support {proj.support}",
            f"shift {proj.shift!r}",
            f"distance_sq {proj.distance_sq!r}",
            f"residual {report.residual!r}",
            f"t_basis {t.basis_change!r}",
            f"t_eig {t.eigensystem!r}",
            f"t_proj {t.projection!r}",
            f"t_reconstruct {t.reconstruction!r}",
            f"t_total {t.total!r}",
        ]
        with open(args.report, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_project(args, parser) -> int:
    if not args.target_sum > 0:
        parser.error(f"--target-sum must be positive, got {args.target_sum}")
    values = fileio.read_spectrum_file(args.infile)
    result = normalize_then_project(values, args.target_sum)
    fileio.write_projection_file(args.out, result)
    return EXIT_OK


def _cmd_benchmark(args, parser) -> int:
    if not 1 <= args.min_qubits <= args.max_qubits <= 10:
        parser.error("need 1 <= --min-qubits <= --max-qubits <= 10")
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    if args.repetitions < 1:
        parser.error("--repetitions must be >= 1")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for m in methods:
        if m not in bench.ALL_METHODS:
            parser.error(f"unknown method {m!r}; choose from "
                         f"{', '.join(bench.ALL_METHODS)}")
    rows = bench.run_benchmark(args.min_qubits, args.max_qubits, args.trials,
                               methods, purity=args.purity,
                               variance=args.variance, seed=args.seed,
                               repetitions=args.repetitions, jobs=args.jobs)
    bench.write_benchmark_csv(args.csv, rows)
    return EXIT_OK


_HANDLERS = {
    "simulate": _cmd_simulate,
    "reconstruct": _cmd_reconstruct,
    "project": _cmd_project,
    "benchmark": _cmd_benchmark,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, parser)
    except OSError as exc:
        print(f"mltomo: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except np.linalg.LinAlgError as exc:
        print(f"mltomo: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"mltomo: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
