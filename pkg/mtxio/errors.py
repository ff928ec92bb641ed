"""Exceptions raised while reading problems and writing reports."""
from typing import Optional

from krylov.errors import KrylovError


class ParseError(KrylovError, ValueError):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, line: int, reason: str, path: Optional[str] = None):
        self.line = line
        self.reason = reason
        self.path = path
        where = f"{path}, line {line}" if path else f"line {line}"
        super().__init__(f"{where}: {reason}")


class NotSymmetric(KrylovError, ValueError):
    """A general-symmetry Matrix Market file holds an asymmetric matrix."""

    def __init__(self, i: int, j: int, gap: float):
        self.i = i
        self.j = j
        self.gap = gap
        super().__init__(
            f"matrix is not symmetric: entries ({i + 1}, {j + 1}) and ({j + 1}, {i + 1}) "
            f"differ by {gap:.3e}"
        )


class UnsupportedField(KrylovError, ValueError):
    """Matrix Market field or format outside real/integer coordinate/array."""

    def __init__(self, what: str):
        self.what = what
        super().__init__(f"unsupported Matrix Market {what}")


class EmptyVector(KrylovError, ValueError):
    """A vector file contains no entries."""

    def __init__(self, path: Optional[str] = None):
        self.path = path
        super().__init__(f"vector file {path} is empty" if path else "vector is empty")


class MatrixTooLarge(KrylovError, ValueError):
    """Dense materialization refused above the size cap."""

    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(f"matrix dimension {n} exceeds the dense limit {limit}")


class ReportError(KrylovError, OSError):
    """A report could not be serialized, parsed or written."""
