"""Machine-readable and text renderings of solve reports.

JSON keys always appear in the order of the ``ReportDocument`` fields and
floats are written with 17 significant digits, so
serialize -> parse -> serialize is byte-identical. The text rendering prints
the q, y and delta sequences column by column with four decimals.
"""
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional, Union
import json
import logging
import re
import sys

import numpy as np

from krylov.models import KrylovConfig, MinresReport, SolveReport

from .errors import ReportError

logger = logging.getLogger("unnormalized_krylov.report")

SCHEMA_VERSION = "1.0"

# Entries with smaller magnitude print as "0" in text reports
TEXT_ZERO = 5e-5


def _floats(v: Optional[np.ndarray]) -> Optional[list[float]]:
    return None if v is None else [float(x) for x in v]


# Floats travel through json.dumps as marked strings and are unquoted afterwards
_FLOAT_MARK = "\x00"
_MARKED_FLOAT = re.compile(r'"\\u0000([^"\\]*)\\u0000"')


def format_float(value: float) -> str:
    """17 significant digits; integral values keep a ".0" so they read back as floats."""
    text = f"{value:.17g}"
    if text.lstrip("-").isdigit():
        text += ".0"
    return text


def _mark_floats(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_mark_floats(v) for v in obj]
    if isinstance(obj, float):
        if not np.isfinite(obj):
            raise ValueError(f"Out of range float value {obj!r}")
        return _FLOAT_MARK + format_float(obj) + _FLOAT_MARK
    return obj


@dataclass
class ReportDocument:
    """Serializable mirror of a SolveReport or MinresReport."""
    method: str
    problem: dict[str, Any]
    config: dict[str, Any]
    verdict: str
    status: str
    r: int
    delta_r: float
    residual_norm: float
    x: Optional[list[float]] = None
    certificate: Optional[dict[str, list[float]]] = None
    minres: Optional[dict[str, Any]] = None
    iterations: list[dict[str, Any]] = field(default_factory=list)
    lanczos_vectors: dict[str, list[list[float]]] = field(
        default_factory=lambda: {"q": [], "y": []}
    )
    minres_iterates: list[list[float]] = field(default_factory=list)
    timings: Optional[dict[str, float]] = None
    schema_version: str = SCHEMA_VERSION

    @classmethod
    def from_report(
        cls,
        report: SolveReport,
        config: KrylovConfig,
        name: str = "problem",
        dimension: Optional[int] = None,
        timings: Optional[dict[str, float]] = None,
    ) -> "ReportDocument":
        """
        Build the document for a finished solve.

        Args:
            report: SolveReport or MinresReport
            config: Configuration the solve ran with
            name: Problem name
            dimension: n (taken from the solution or certificate when omitted)
            timings: Optional wall-clock seconds per phase

        Returns:
            ReportDocument
        """
        trace = report.trace
        m = trace.steps
        iterations = []
        for k in range(m + 1):
            stepped = k < m
            iterations.append({
                "k": k,
                "alpha": float(trace.alphas[k]) if stepped else None,
                "beta": float(trace.betas[k - 1]) if stepped and k >= 1 else None,
                "theta": float(trace.thetas[k]) if stepped else None,
                "q_norm": float(trace.qnorms[k]),
                "delta": float(trace.deltas[k]),
            })

        history = report.history or []
        if dimension is None:
            known = report.x if report.x is not None else report.certificate_y
            dimension = int(known.size) if known is not None else (
                int(history[0].q.size) if history else 0
            )

        certificate = None
        if report.certificate_y is not None:
            certificate = {
                "y": _floats(report.certificate_y),
                "normalized": _floats(report.certificate_normalized),
            }

        minres = None
        iterates: list[list[float]] = []
        if isinstance(report, MinresReport):
            final = report.residual_history[-1] if report.residual_history else None
            minres = {
                "x_mr": _floats(report.x_mr),
                "residual_norm": final,
                "residual_norm_squared": None if final is None else final * final,
                "residual_history": [float(v) for v in report.residual_history],
                "x_difference": report.x_difference,
            }
            iterates = [_floats(v) for v in (report.iterates or [])]

        return cls(
            method=report.method,
            problem={"name": name, "dimension": dimension},
            config={
                "q_tol": config.q_tol,
                "delta_tol": config.delta_tol,
                "max_iter": config.iteration_limit(dimension),
                "scaling": config.strategy.value,
                "reorthogonalize": config.reorthogonalize,
            },
            verdict=report.verdict.value,
            status=report.status.value,
            r=int(report.r),
            delta_r=float(report.delta_r),
            residual_norm=float(report.residual_norm),
            x=_floats(report.x),
            certificate=certificate,
            minres=minres,
            iterations=iterations,
            lanczos_vectors={
                "q": [_floats(t.q) for t in history],
                "y": [_floats(t.y) for t in history],
            },
            minres_iterates=iterates,
            timings=timings,
        )

    def to_dict(self) -> dict[str, Any]:
        """Dictionary with schema_version first, then the fields in order."""
        data = asdict(self)
        version = data.pop("schema_version")
        return {"schema_version": version, **data}


def to_json(doc: ReportDocument) -> str:
    """
    Serialize a report document.

    Raises:
        ReportError: the document holds NaN or Inf
    """
    try:
        text = json.dumps(_mark_floats(doc.to_dict()), indent=2)
    except ValueError as e:
        logger.error(f"Report is not finite: {e}")
        raise ReportError(f"report contains non-finite values: {e}") from e
    return _MARKED_FLOAT.sub(r"\1", text) + "\n"


def parse_report(text: str) -> ReportDocument:
    """
    Parse JSON produced by ``to_json``.

    Raises:
        ReportError: invalid JSON, unknown schema version or missing fields
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ReportError(f"invalid report JSON: {e}") from e
    if not isinstance(data, dict):
        raise ReportError("report must be a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ReportError(f"unsupported schema_version {version!r}")

    names = {f.name for f in fields(ReportDocument)}
    unknown = set(data) - names
    if unknown:
        raise ReportError(f"unknown report fields: {sorted(unknown)}")
    try:
        return ReportDocument(**data)
    except TypeError as e:
        raise ReportError(f"incomplete report: {e}") from e


# =============================================================================
# Text rendering
# =============================================================================


def format_number(value: Optional[float]) -> str:
    """Four decimals, with magnitudes below 5e-5 printed as 0."""
    if value is None:
        return "-"
    if abs(value) < TEXT_ZERO:
        return "0"
    return f"{value:.4f}"


def format_row(values: list[Optional[float]]) -> str:
    return " ".join(format_number(v) for v in values)


def _columns(name: str, columns: list[list[float]]) -> list[str]:
    """Render vectors as the columns of a table, one row per coordinate."""
    if not columns:
        return []
    lines = [f"{name} ="]
    for i in range(len(columns[0])):
        lines.append("  " + format_row([col[i] for col in columns]))
    return lines


def render_text(doc: ReportDocument) -> str:
    """
    Human-readable report laid out like a worked example.

    Tables list one vector per column (k = 0, 1, ...); scalars per step
    share one line.
    """
    lines = [
        f"method = {doc.method}",
        f"problem = {doc.problem.get('name')} (n = {doc.problem.get('dimension')})",
        f"scaling = {doc.config.get('scaling')}",
        f"verdict = {doc.verdict}",
        f"status = {doc.status}",
        f"r = {doc.r}",
    ]
    lines += _columns("q", doc.lanczos_vectors.get("q", []))
    lines += _columns("y", doc.lanczos_vectors.get("y", []))
    lines.append("delta = " + format_row([it["delta"] for it in doc.iterations]))
    lines.append("theta = " + format_row([it["theta"] for it in doc.iterations[:-1]]))
    lines.append("qnorm = " + format_row([it["q_norm"] for it in doc.iterations]))

    if doc.x is not None:
        lines.append("x = " + format_row(doc.x))
    if doc.certificate is not None:
        lines.append("certificate y = " + format_row(doc.certificate["y"]))
    lines.append(f"residual = {doc.residual_norm:.6e}")

    if doc.minres is not None:
        lines += _columns("xMR", doc.minres_iterates)
        if doc.minres.get("x_mr") is not None:
            lines.append("x_mr = " + format_row(doc.minres["x_mr"]))
        squared = doc.minres.get("residual_norm_squared")
        if squared is not None:
            lines.append(f"||H x_mr + c||^2 = {squared:.10g}")
    if doc.timings:
        lines.append("timings = " + ", ".join(f"{k} {v:.6f}s" for k, v in doc.timings.items()))
    return "\n".join(lines) + "\n"


def write_report(
    doc: ReportDocument,
    path: Optional[Union[str, Path]] = None,
    fmt: str = "json",
) -> None:
    """
    Write a report as JSON or text.

    Args:
        doc: Report document
        path: Destination file, or None for standard output
        fmt: "json" or "text"

    Raises:
        ReportError: unknown format, non-finite values or an unwritable path
    """
    if fmt == "json":
        text = to_json(doc)
    elif fmt == "text":
        text = render_text(doc)
    else:
        raise ReportError(f"unknown report format '{fmt}'")

    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as e:
        logger.error(f"Failed to write report to {path}: {e}")
        raise ReportError(f"cannot write report to {path}: {e}") from e
    logger.info(f"Wrote {fmt} report to {path}")
