"""Command-line front end.

Usage:
    python -m krylov --demo compatible --method krylov --format text
    python -m krylov --matrix H.mtx --c c.txt --method minres --output report.json

Exit codes: 0 compatible, 1 incompatible (a certificate was produced),
2 usage or input error, 3 no termination or numerical breakdown.
"""
from dataclasses import dataclass
from typing import Optional, Sequence
import argparse
import logging
import sys
import time

from mtxio.errors import ReportError
from mtxio.models import ProblemInstance
from mtxio.report import ReportDocument, write_report

from .cg import solve_cg
from .demos import DEMOS, get_demo
from .errors import DidNotTerminate, KrylovError, NumericalBreakdown
from .minres import solve_minres
from .models import SQRT_EPS, KrylovConfig, ScalingStrategy, SolveReport, Verdict
from .solver import check_delta_laws, solve_krylov

logger = logging.getLogger("unnormalized_krylov.cli")

EXIT_COMPATIBLE = 0
EXIT_INCOMPATIBLE = 1
EXIT_USAGE = 2
EXIT_FAILURE = 3

METHODS = {
    "krylov": solve_krylov,
    "minres": solve_minres,
    "cg": solve_cg,
}


class UsageError(Exception):
    """Invalid combination of command-line options."""


@dataclass(frozen=True)
class CliOptions:
    """Validated command-line options."""
    matrix_path: Optional[str]
    c_path: Optional[str]
    rhs_is_b: bool
    method: str
    q_tol: float
    delta_tol: float
    scaling: ScalingStrategy
    max_iter: Optional[int]
    reorth: bool
    output: Optional[str]
    format: str
    demo: Optional[str]
    verbose: bool = False
    timings: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliOptions":
        """Check option combinations the parser cannot express."""
        if args.demo is not None:
            if args.matrix or args.c or args.rhs_is_b:
                raise UsageError("--demo cannot be combined with --matrix, --c or --rhs-is-b")
        elif not args.matrix or not args.c:
            raise UsageError("either --demo or both --matrix and --c are required")
        if not args.q_tol > 0 or not args.delta_tol > 0:
            raise UsageError("tolerances must be positive")
        if args.max_iter is not None and args.max_iter < 1:
            raise UsageError("--max-iter must be at least 1")
        return cls(
            matrix_path=args.matrix,
            c_path=args.c,
            rhs_is_b=args.rhs_is_b,
            method=args.method,
            q_tol=args.q_tol,
            delta_tol=args.delta_tol,
            scaling=ScalingStrategy.from_name(args.scaling),
            max_iter=args.max_iter,
            reorth=args.reorth,
            output=args.output,
            format=args.format,
            demo=args.demo,
            verbose=args.verbose,
            timings=args.timings,
        )

    def config(self) -> KrylovConfig:
        return KrylovConfig(
            q_tol=self.q_tol,
            delta_tol=self.delta_tol,
            max_iter=self.max_iter,
            strategy=self.scaling,
            reorthogonalize=self.reorth,
            keep_history=self.format == "text",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krylov-solve",
        description="Solve Hx + c = 0 for symmetric H, or certify that no solution exists",
    )
    parser.add_argument("--matrix", help="Matrix Market file holding H")
    parser.add_argument("--c", help="Vector file holding c (Matrix Market array or plain text)")
    parser.add_argument(
        "--rhs-is-b",
        action="store_true",
        help="The vector file holds b of Hx = b; c is taken as -b",
    )
    parser.add_argument("--method", choices=list(METHODS), default="krylov")
    parser.add_argument("--q-tol", type=float, default=SQRT_EPS, help="Tolerance on ||q_k|| (default sqrt(eps))")
    parser.add_argument("--delta-tol", type=float, default=SQRT_EPS, help="Tolerance on |delta_r| (default sqrt(eps))")
    parser.add_argument(
        "--scaling",
        choices=[s.value for s in ScalingStrategy],
        default=ScalingStrategy.YNORM.value,
        help="Scale of each new triple (ignored by cg)",
    )
    parser.add_argument("--max-iter", type=int, default=None, help="Step limit (default n + 2)")
    parser.add_argument("--reorth", action="store_true", help="Fully reorthogonalize the q vectors")
    parser.add_argument("--output", help="Report destination (default: standard output)")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.add_argument("--demo", choices=list(DEMOS), help="Run a built-in example")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log every step")
    parser.add_argument("--timings", action="store_true", help="Add wall-clock timings to the report")
    return parser


def load(options: CliOptions) -> ProblemInstance:
    if options.demo is not None:
        demo = get_demo(options.demo)
        return ProblemInstance(H=demo.H, c=demo.c, name=demo.name)
    return ProblemInstance.from_files(options.matrix_path, options.c_path, options.rhs_is_b)


def exit_code(report: SolveReport) -> int:
    """Map a verdict to the process exit code."""
    if report.verdict == Verdict.COMPATIBLE:
        return EXIT_COMPATIBLE
    if report.verdict == Verdict.INCOMPATIBLE:
        return EXIT_INCOMPATIBLE
    return EXIT_FAILURE


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, solve, and emit the report.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Exit code 0, 1, 2 or 3
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for bad usage
        return EXIT_COMPATIBLE if e.code == 0 else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        options = CliOptions.from_args(args)
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    timings: dict[str, float] = {}
    started = time.perf_counter()
    try:
        problem = load(options)
    except (OSError, KrylovError, ValueError) as e:
        logger.error(f"Failed to load problem: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    timings["load"] = time.perf_counter() - started

    config = options.config()
    solve = METHODS[options.method]
    if options.method == "cg" and options.scaling != ScalingStrategy.YNORM:
        logger.info("cg ignores --scaling")

    started = time.perf_counter()
    try:
        report = solve(problem.H, problem.c, config)
        code = exit_code(report)
    except DidNotTerminate as e:
        print(f"error: {e}", file=sys.stderr)
        report = e.report
        code = EXIT_FAILURE
    except NumericalBreakdown as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except KrylovError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    timings["solve"] = time.perf_counter() - started

    if report is None:
        return code
    if options.method != "cg" and report.trace.steps:
        summary = check_delta_laws(report.trace, config)
        if summary.definiteness_hint:
            logger.info(f"Sign pattern of delta: H is {summary.definiteness_hint}")

    doc = ReportDocument.from_report(
        report,
        config,
        name=problem.name,
        dimension=problem.dimension,
        timings=timings if options.timings else None,
    )
    try:
        write_report(doc, options.output, options.format)
    except ReportError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
