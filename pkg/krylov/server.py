"""Krylov MCP Server - symmetric system solves via Model Context Protocol."""
import logging
import os
from typing import Optional

from mcp.server.fastmcp import FastMCP

from mtxio.matrix_market import write_matrix_market, write_vector
from mtxio.models import ProblemInstance
from mtxio.report import ReportDocument, to_json
from oracle.dense import eigendecompose, is_compatible, krylov_grade, nullspace_basis
from shared.paths import SolverPaths, ensure_data_dirs

from .cli import METHODS
from .demos import get_demo
from .errors import DidNotTerminate, NumericalBreakdown
from .models import KrylovConfig, ScalingStrategy
from .solver import check_delta_laws

logger = logging.getLogger("unnormalized_krylov.server")

# Initialize the MCP server
mcp = FastMCP("krylov")

# App name can be overridden via environment
APP_NAME = os.environ.get("KRYLOV_APP_NAME", "unnormalized-krylov")

# Cached instances
_paths: Optional[SolverPaths] = None


def get_paths() -> SolverPaths:
    """Get or create paths instance."""
    global _paths
    if _paths is None:
        _paths = SolverPaths(APP_NAME)
        ensure_data_dirs(_paths.data_dir)
    return _paths


def setup_logging(level: int = logging.INFO) -> logging.Handler:
    """
    Send the solver loggers to <data_dir>/logs/server.log.

    Returns:
        The attached file handler
    """
    log_file = get_paths().logs_dir / "server.log"
    handler = logging.FileHandler(log_file)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("unnormalized_krylov")
    root.setLevel(level)
    root.addHandler(handler)
    return handler


def _solve(problem: ProblemInstance, method: str, scaling: str, reorthogonalize: bool, save: bool) -> dict:
    if method not in METHODS:
        raise ValueError(f"unknown method '{method}' (expected one of: {', '.join(METHODS)})")
    config = KrylovConfig(
        strategy=ScalingStrategy.from_name(scaling),
        reorthogonalize=reorthogonalize,
    )
    try:
        report = METHODS[method](problem.H, problem.c, config)
    except DidNotTerminate as e:
        logger.error(f"Solve of {problem.name} did not terminate")
        report = e.report
    except NumericalBreakdown as e:
        logger.error(f"Solve of {problem.name} broke down: {e}")
        return {
            "verdict": "undetermined",
            "status": "breakdown",
            "error": str(e),
            "error_type": type(e).__name__,
        }

    doc = ReportDocument.from_report(report, config, name=problem.name, dimension=problem.dimension)
    result = {
        "verdict": doc.verdict,
        "status": doc.status,
        "r": doc.r,
        "residual_norm": doc.residual_norm,
        "x": doc.x,
        "certificate": doc.certificate["normalized"] if doc.certificate else None,
        "deltas": [it["delta"] for it in doc.iterations],
    }
    if doc.minres is not None:
        result["x_mr"] = doc.minres["x_mr"]
        result["minres_residual_norm"] = doc.minres["residual_norm"]
    if method != "cg" and report.trace.steps:
        result["definiteness_hint"] = check_delta_laws(report.trace, config).definiteness_hint

    if save:
        target = get_paths().report_path(f"{problem.name}-{method}")
        target.write_text(to_json(doc))
        result["report_path"] = str(target)
    return result


# =============================================================================
# SOLVE OPERATIONS (2 tools)
# =============================================================================


@mcp.tool()
def solve_system(
    matrix_path: str,
    c_path: str,
    method: str = "krylov",
    scaling: str = "ynorm",
    rhs_is_b: bool = False,
    reorthogonalize: bool = False,
    save: bool = False,
) -> dict:
    """
    Solve Hx + c = 0 for a symmetric H, or certify that no solution exists.

    Args:
        matrix_path: Matrix Market file holding H
        c_path: Vector file holding c (or b with rhs_is_b)
        method: "krylov", "minres" or "cg"
        scaling: "ynorm", "qnorm", "unit" or "normalized"
        rhs_is_b: The vector file holds b of Hx = b
        reorthogonalize: Fully reorthogonalize the Lanczos vectors
        save: Also write the JSON report under the data directory

    Returns:
        Verdict, r, solution or normalized certificate, and the delta sequence.
        A numerical breakdown gives verdict "undetermined", status
        "breakdown" and the error message instead.
    """
    problem = ProblemInstance.from_files(matrix_path, c_path, rhs_is_b)
    return _solve(problem, method, scaling, reorthogonalize, save)


@mcp.tool()
def run_demo(name: str = "compatible", method: str = "krylov", save: bool = False) -> dict:
    """
    Run a built-in example.

    Args:
        name: "compatible" or "incompatible"
        method: "krylov", "minres" or "cg"
        save: Also write the JSON report under the data directory

    Returns:
        Same fields as solve_system.
    """
    demo = get_demo(name)
    problem = ProblemInstance(H=demo.H, c=demo.c, name=demo.name)
    return _solve(problem, method, "ynorm", False, save)


# =============================================================================
# PROBLEM OPERATIONS (2 tools)
# =============================================================================


@mcp.tool()
def inspect_problem(matrix_path: str, c_path: str, rhs_is_b: bool = False) -> dict:
    """
    Describe a problem with dense reference computations.

    Args:
        matrix_path: Matrix Market file holding H
        c_path: Vector file holding c

    Returns:
        Dimension, eigenvalue range, nullity, grade of c and whether c lies in R(H).
    """
    problem = ProblemInstance.from_files(matrix_path, c_path, rhs_is_b)
    ed = eigendecompose(problem.H)
    _, grade = krylov_grade(problem.H, problem.c)
    return {
        "name": problem.name,
        "dimension": problem.dimension,
        "min_eigenvalue": float(ed.eigenvalues[0]),
        "max_eigenvalue": float(ed.eigenvalues[-1]),
        "nullity": int(nullspace_basis(ed).shape[1]),
        "grade": grade,
        "compatible": is_compatible(ed, problem.c),
    }


@mcp.tool()
def export_demo(name: str = "compatible") -> dict:
    """
    Write a built-in example as Matrix Market files.

    Args:
        name: "compatible" or "incompatible"

    Returns:
        Paths of the matrix and vector files.
    """
    demo = get_demo(name)
    problems = get_paths().problems_dir
    matrix_path = problems / f"{demo.name}.mtx"
    c_path = problems / f"{demo.name}_c.mtx"
    write_matrix_market(demo.H, matrix_path, comment=demo.description)
    write_vector(demo.c, c_path)
    return {"matrix_path": str(matrix_path), "c_path": str(c_path)}


if __name__ == "__main__":
    setup_logging()
    mcp.run()
