"""Problem files (Matrix Market, plain-text vectors) and solve reports."""
from .errors import EmptyVector, MatrixTooLarge, NotSymmetric, ParseError, ReportError, UnsupportedField
from .matrix_market import (
    parse_matrix_market,
    parse_vector,
    read_matrix_market,
    read_vector,
    write_matrix_market,
    write_vector,
)
from .models import ProblemInstance, load_problem
from .report import ReportDocument, parse_report, render_text, to_json, write_report

__all__ = [
    "EmptyVector",
    "MatrixTooLarge",
    "NotSymmetric",
    "ParseError",
    "ProblemInstance",
    "ReportDocument",
    "ReportError",
    "UnsupportedField",
    "load_problem",
    "parse_matrix_market",
    "parse_report",
    "parse_vector",
    "read_matrix_market",
    "read_vector",
    "render_text",
    "to_json",
    "write_matrix_market",
    "write_report",
    "write_vector",
]
