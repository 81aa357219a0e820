"""
Command-line entry point.

    python -m kreinspec analyze H.txt [--metric eta.txt] [--json] [--out report.json]
    python -m kreinspec fourlevel --a0 1 --A 0.5+0.3i --B=0.2-0.1i
    python -m kreinspec sweep --a0 0 --A 1 --B 0 --axis absB --range 0:2 --steps 201 --out sweep.txt
    python -m kreinspec selftest [--json] [--inject-tol 1e-30]

Values starting with '-' must be attached with '=' (for example `--B=-2i`,
`--range=-1:1`). Exit codes: 0 success, 1 selftest failure, 2 input error,
3 numerical failure.
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence, Tuple

import structlog
from pydantic import ValidationError

from kreinspec import __version__
from kreinspec.core.config import settings
from kreinspec.core.exceptions import InputError, KreinSpecError
from kreinspec.core.logging import configure_logging
from kreinspec.numerics.fourlevel import FourLevelParams, SweepAxis
from kreinspec.schemas.common import ErrorResponse
from kreinspec.services.analysis_service import analysis_service
from kreinspec.services.matrix_io import parse_complex, read_matrix
from kreinspec.services.report_writer import (
    render_analysis,
    render_fourlevel,
    render_selftest,
    render_sweep,
    to_json,
)
from kreinspec.services.selftest_service import SelftestService

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _range_arg(text: str) -> Tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from exc


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rtol", type=_positive_float, help="residual tolerance (overrides KREINSPEC_RTOL)")
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("--log-level", help="log level for stderr diagnostics")


def _add_model(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a0", type=float, required=True, help="real diagonal parameter")
    parser.add_argument("--A", dest="A", type=_complex_arg, default=0j, help="complex parameter A")
    parser.add_argument("--B", dest="B", type=_complex_arg, default=0j, help="complex parameter B")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kreinspec",
        description="Pseudo-Hermitian Hamiltonians with even PT-symmetry.",
    )
    parser.add_argument("--version", action="version", version=f"kreinspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze a Hamiltonian from a matrix file")
    analyze.add_argument("matrix_file")
    analyze.add_argument("--metric", help="metric operator file")
    analyze.add_argument("--out", help="write the JSON report to this file")
    _add_common(analyze)

    fourlevel = sub.add_parser("fourlevel", help="analytic and numeric four-level model")
    _add_model(fourlevel)
    fourlevel.add_argument("--out", help="write the JSON report to this file")
    _add_common(fourlevel)

    sweep = sub.add_parser("sweep", help="phase sweep with exceptional-point bisection")
    _add_model(sweep)
    sweep.add_argument("--axis", required=True, choices=[a.value for a in SweepAxis])
    sweep.add_argument("--range", dest="range", type=_range_arg, required=True, help="lo:hi")
    sweep.add_argument("--steps", type=int, default=101)
    sweep.add_argument("--out", help="sweep data file (columns t D phase)")
    _add_common(sweep)

    selftest = sub.add_parser("selftest", help="run the acceptance suite")
    selftest.add_argument("--inject-tol", type=float, help="replace every threshold with this value")
    _add_common(selftest)
    return parser


def _params(args: argparse.Namespace) -> FourLevelParams:
    try:
        return FourLevelParams(a0=args.a0, A=args.A, B=args.B)
    except ValidationError as exc:
        raise InputError(
            "Invalid model parameters", details={"errors": exc.errors(include_url=False, include_input=False, include_context=False)}
        ) from exc


def _emit(args: argparse.Namespace, report, text: str) -> None:
    if args.json:
        sys.stdout.buffer.write(to_json(report))
        sys.stdout.flush()
    else:
        sys.stdout.write(text)
    out = getattr(args, "out", None)
    if out and args.command in ("analyze", "fourlevel"):
        Path(out).write_bytes(to_json(report))


def _run(args: argparse.Namespace) -> int:
    if args.command == "analyze":
        H = read_matrix(args.matrix_file)
        eta = read_matrix(args.metric) if args.metric else None
        report = analysis_service.analyze(H, eta, source=args.matrix_file, metric_source=args.metric)
        _emit(args, report, render_analysis(report))
        return EXIT_OK

    if args.command == "fourlevel":
        report = analysis_service.fourlevel(_params(args))
        _emit(args, report, render_fourlevel(report))
        return EXIT_OK

    if args.command == "sweep":
        lo, hi = args.range
        report = analysis_service.sweep(_params(args), args.axis, lo, hi, args.steps, out=args.out)
        _emit(args, report, render_sweep(report))
        return EXIT_OK

    report = SelftestService().run(inject_tol=args.inject_tol)
    _emit(args, report, render_selftest(report))
    return EXIT_OK if report.passed else EXIT_SELFTEST_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(level=args.log_level)
    saved_rtol = settings.RTOL
    if args.rtol is not None:
        settings.RTOL = args.rtol

    try:
        return _run(args)
    except KreinSpecError as exc:
        error = ErrorResponse(
            error_code=exc.error_code,
            message=exc.message,
            exit_code=exc.exit_code,
            stage=exc.details.get("stage"),
            details=exc.details or None,
        )
        stage_text = f" stage={error.stage}" if error.stage else ""
        sys.stderr.write(f"error [{error.error_code}]{stage_text}: {error.message}\n")
        if args.json:
            sys.stdout.buffer.write(to_json(error))
            sys.stdout.flush()
        logger.debug("cli.failed", error_code=exc.error_code, details=exc.details)
        return exc.exit_code
    finally:
        # --rtol applies to this invocation only
        settings.RTOL = saved_rtol
