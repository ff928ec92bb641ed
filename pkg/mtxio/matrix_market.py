"""Matrix Market and plain-text readers and writers for problem data.

Supported on input: ``coordinate`` and ``array`` formats with ``real`` or
``integer`` fields and ``symmetric`` or ``general`` symmetry. General
matrices are checked for symmetry. Matrices are materialized dense.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Union
import logging

import numpy as np

from krylov.errors import AsymmetryExceeded
from krylov.operator import ASYMMETRY_TOL, DenseSymmetric, as_vector, make_dense

from .errors import EmptyVector, MatrixTooLarge, NotSymmetric, ParseError, UnsupportedField

logger = logging.getLogger("unnormalized_krylov.mtxio")

PathLike = Union[str, Path]

BANNER = "%%MatrixMarket"
MAX_DIMENSION = 5000

FORMATS = ("coordinate", "array")
FIELDS = ("real", "integer")
SYMMETRIES = ("symmetric", "general")


@dataclass(frozen=True)
class Header:
    """Parsed banner line."""
    format: str
    field: str
    symmetry: str

    @classmethod
    def from_line(cls, line: str, lineno: int = 1) -> "Header":
        """Parse ``%%MatrixMarket matrix <format> <field> <symmetry>``."""
        parts = line.strip().split()
        if len(parts) != 5 or parts[0] != BANNER:
            raise ParseError(lineno, f"expected '{BANNER} matrix <format> <field> <symmetry>'")
        obj, fmt, fld, sym = (p.lower() for p in parts[1:])
        if obj != "matrix":
            raise UnsupportedField(f"object '{obj}'")
        if fmt not in FORMATS:
            raise UnsupportedField(f"format '{fmt}'")
        if fld not in FIELDS:
            raise UnsupportedField(f"field '{fld}'")
        if sym not in SYMMETRIES:
            raise UnsupportedField(f"symmetry '{sym}'")
        return cls(fmt, fld, sym)

    def banner(self) -> str:
        return f"{BANNER} matrix {self.format} {self.field} {self.symmetry}"


def _data_lines(text: str, start: int = 0) -> Iterator[tuple[int, list[str]]]:
    """Yield (1-based line number, tokens) for non-blank, non-comment lines."""
    for lineno, raw in enumerate(text.splitlines()[start:], start=start + 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%") or stripped.startswith("#"):
            continue
        yield lineno, stripped.split()


def _number(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"'{token}' is not a number") from None
    if not np.isfinite(value):
        raise ParseError(lineno, f"non-finite value '{token}'")
    return value


def _index(token: str, n: int, lineno: int) -> int:
    try:
        i = int(token)
    except ValueError:
        raise ParseError(lineno, f"'{token}' is not an integer index") from None
    if not 1 <= i <= n:
        raise ParseError(lineno, f"index {i} outside 1..{n}")
    return i - 1


def _size_line(lines: Iterator[tuple[int, list[str]]], count: int, what: str) -> tuple[int, list[int]]:
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError(1, f"missing size line ({what})") from None
    if len(tokens) != count:
        raise ParseError(lineno, f"size line must hold {count} integers ({what})")
    try:
        sizes = [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"size line must hold {count} integers ({what})") from None
    if any(s < 0 for s in sizes):
        raise ParseError(lineno, "negative size")
    return lineno, sizes


def _read_text(path: Path) -> str:
    """File contents as UTF-8; undecodable bytes are reported with their line."""
    raw = path.read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        lineno = raw.count(b"\n", 0, e.start) + 1
        logger.error(f"{path} is not valid UTF-8 at byte {e.start}")
        raise ParseError(lineno, f"invalid UTF-8 byte at offset {e.start}", str(path)) from None


def parse_matrix_market(text: str, source: Optional[str] = None) -> DenseSymmetric:
    """
    Parse Matrix Market text into a dense symmetric operator.

    Args:
        text: File contents
        source: Name used in error messages

    Returns:
        DenseSymmetric
    """
    first = text.splitlines()[0] if text else ""
    if not first.startswith(BANNER):
        raise ParseError(1, f"missing '{BANNER}' banner", source)
    header = Header.from_line(first)
    lines = _data_lines(text, start=1)

    if header.format == "coordinate":
        size_lineno, (rows, cols, nnz) = _size_line(lines, 3, "rows cols entries")
    else:
        size_lineno, (rows, cols) = _size_line(lines, 2, "rows cols")
    if rows != cols:
        raise ParseError(size_lineno, f"matrix must be square, got {rows} x {cols}", source)
    n = rows
    if n == 0:
        raise ParseError(size_lineno, "matrix dimension is zero", source)
    if n > MAX_DIMENSION:
        raise MatrixTooLarge(n, MAX_DIMENSION)

    a = np.zeros((n, n))
    symmetric = header.symmetry == "symmetric"
    last_lineno = size_lineno

    if header.format == "coordinate":
        seen: set[tuple[int, int]] = set()
        count = 0
        for lineno, tokens in lines:
            last_lineno = lineno
            if len(tokens) != 3:
                raise ParseError(lineno, "coordinate entry must be 'row col value'", source)
            i = _index(tokens[0], n, lineno)
            j = _index(tokens[1], n, lineno)
            key = (max(i, j), min(i, j)) if symmetric else (i, j)
            if key in seen:
                raise ParseError(lineno, f"duplicate entry ({i + 1}, {j + 1})", source)
            seen.add(key)
            value = _number(tokens[2], lineno)
            a[i, j] = value
            if symmetric:
                a[j, i] = value
            count += 1
            if count > nnz:
                raise ParseError(lineno, f"more than the declared {nnz} entries", source)
        if count != nnz:
            raise ParseError(last_lineno, f"declared {nnz} entries, found {count}", source)
    else:
        # column-major; symmetric arrays list the lower triangle only
        positions = [
            (i, j) for j in range(n) for i in range(n) if not symmetric or i >= j
        ]
        count = 0
        for lineno, tokens in lines:
            last_lineno = lineno
            for token in tokens:
                if count >= len(positions):
                    raise ParseError(lineno, f"more than the expected {len(positions)} values", source)
                i, j = positions[count]
                value = _number(token, lineno)
                a[i, j] = value
                if symmetric:
                    a[j, i] = value
                count += 1
        if count != len(positions):
            raise ParseError(last_lineno, f"expected {len(positions)} values, found {count}", source)

    if symmetric:
        return make_dense(a)
    try:
        return make_dense(a, tol=ASYMMETRY_TOL)
    except AsymmetryExceeded as e:
        logger.error(f"General matrix {source or ''} is not symmetric")
        raise NotSymmetric(e.i, e.j, e.gap) from e


def read_matrix_market(path: PathLike) -> DenseSymmetric:
    """
    Read a Matrix Market file.

    Args:
        path: File path

    Returns:
        Dense symmetric operator; entries below the diagonal of symmetric
        coordinate files are mirrored

    Raises:
        ParseError: malformed content, with the offending line
        NotSymmetric: general file with asymmetric data
        UnsupportedField: complex, pattern or other unsupported kinds
        MatrixTooLarge: dimension above the dense cap
    """
    path = Path(path)
    H = parse_matrix_market(_read_text(path), source=str(path))
    logger.debug(f"Read {H.n} x {H.n} matrix from {path}")
    return H


def parse_vector(text: str, source: Optional[str] = None) -> np.ndarray:
    """
    Parse a vector from Matrix Market (n x 1 or 1 x n) or plain text.

    Plain text holds whitespace-separated numbers, usually one per line;
    lines starting with '%' or '#' are comments.
    """
    if text.lstrip().startswith(BANNER):
        lines = text.lstrip().splitlines()
        header = Header.from_line(lines[0])
        data = _data_lines("\n".join(lines), start=1)
        if header.format == "coordinate":
            size_lineno, (rows, cols, nnz) = _size_line(data, 3, "rows cols entries")
        else:
            size_lineno, (rows, cols) = _size_line(data, 2, "rows cols")
        if min(rows, cols) != 1:
            raise ParseError(size_lineno, f"vector must be n x 1, got {rows} x {cols}", source)
        n = max(rows, cols)
        if n == 0:
            raise EmptyVector(source)
        if n > MAX_DIMENSION:
            raise MatrixTooLarge(n, MAX_DIMENSION)
        v = np.zeros(n)
        if header.format == "coordinate":
            count = 0
            last = size_lineno
            for lineno, tokens in data:
                last = lineno
                if len(tokens) != 3:
                    raise ParseError(lineno, "coordinate entry must be 'row col value'", source)
                i = _index(tokens[0], rows, lineno)
                j = _index(tokens[1], cols, lineno)
                v[max(i, j)] = _number(tokens[2], lineno)
                count += 1
            if count != nnz:
                raise ParseError(last, f"declared {nnz} entries, found {count}", source)
            return v
        values = [(lineno, t) for lineno, tokens in data for t in tokens]
        if len(values) != n:
            last = values[-1][0] if values else size_lineno
            raise ParseError(last, f"expected {n} values, found {len(values)}", source)
        return as_vector([_number(t, lineno) for lineno, t in values])

    values = [_number(t, lineno) for lineno, tokens in _data_lines(text) for t in tokens]
    if not values:
        raise EmptyVector(source)
    if len(values) > MAX_DIMENSION:
        raise MatrixTooLarge(len(values), MAX_DIMENSION)
    return as_vector(values)


def read_vector(path: PathLike) -> np.ndarray:
    """
    Read a vector file.

    Args:
        path: Matrix Market array (n x 1) or plain text, one number per line

    Returns:
        Length-n vector

    Raises:
        ParseError: malformed content
        EmptyVector: no entries
    """
    path = Path(path)
    return parse_vector(_read_text(path), source=str(path))


def format_matrix_market(H: DenseSymmetric, comment: Optional[str] = None) -> str:
    """Coordinate real symmetric text holding the nonzero lower triangle."""
    a = H.entries
    n = H.n
    rows, cols = np.nonzero(np.tril(a))
    entries = sorted(zip(cols.tolist(), rows.tolist()))  # column-major order
    lines = [Header("coordinate", "real", "symmetric").banner()]
    if comment:
        lines.extend(f"% {line}" for line in comment.splitlines())
    lines.append(f"{n} {n} {len(entries)}")
    lines.extend(f"{i + 1} {j + 1} {float(a[i, j])!r}" for j, i in entries)
    return "\n".join(lines) + "\n"


def write_matrix_market(H: DenseSymmetric, path: PathLike, comment: Optional[str] = None) -> None:
    """
    Write H as a coordinate real symmetric Matrix Market file.

    Values use the shortest round-trip representation, so reading the
    file back gives the same entries.
    """
    path = Path(path)
    path.write_text(format_matrix_market(H, comment))
    logger.debug(f"Wrote {H.n} x {H.n} matrix to {path}")


def format_vector(v: np.ndarray) -> str:
    """Array real general text, n x 1."""
    v = as_vector(v)
    lines = [Header("array", "real", "general").banner(), f"{v.size} 1"]
    lines.extend(repr(float(x)) for x in v)
    return "\n".join(lines) + "\n"


def write_vector(v: np.ndarray, path: PathLike) -> None:
    """Write v as an n x 1 Matrix Market array."""
    Path(path).write_text(format_vector(v))
