"""Tests for Matrix Market and vector files."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from krylov.errors import DimensionMismatch, ZeroRightHandSide
from krylov.operator import make_dense, make_diagonal
from mtxio.errors import EmptyVector, MatrixTooLarge, NotSymmetric, ParseError, UnsupportedField
from mtxio.matrix_market import (
    format_matrix_market,
    parse_matrix_market,
    parse_vector,
    read_matrix_market,
    read_vector,
    write_matrix_market,
    write_vector,
)
from mtxio.models import ProblemInstance, load_problem

EXAMPLE_MTX = """%%MatrixMarket matrix coordinate real symmetric
% diag(3, 2, 1, 0, -1, -2, -3)
7 7 6
1 1 3.0
2 2 2.0
3 3 1.0
5 5 -1.0
6 6 -2.0
7 7 -3.0
"""


class TestReadMatrixMarket:
    """Test matrix parsing."""

    def test_coordinate_symmetric(self):
        """Lower-triangle entries are mirrored."""
        text = "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2.0\n2 1 1.0\n2 2 3.0\n"
        np.testing.assert_array_equal(parse_matrix_market(text).entries, [[2.0, 1.0], [1.0, 3.0]])

    def test_example_matrix(self, tmp_path):
        """A zero diagonal entry may be omitted."""
        path = tmp_path / "example.mtx"
        path.write_text(EXAMPLE_MTX)
        H = read_matrix_market(path)
        np.testing.assert_array_equal(H.entries, np.diag([3.0, 2.0, 1.0, 0.0, -1.0, -2.0, -3.0]))

    def test_general_symmetric_data(self):
        text = "%%MatrixMarket matrix coordinate real general\n2 2 4\n1 1 1\n1 2 5\n2 1 5\n2 2 1\n"
        np.testing.assert_array_equal(parse_matrix_market(text).entries, [[1.0, 5.0], [5.0, 1.0]])

    def test_general_asymmetric(self):
        text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.0\n2 1 2.0\n"
        with pytest.raises(NotSymmetric):
            parse_matrix_market(text)

    def test_array_general(self):
        """Array files are column-major."""
        text = "%%MatrixMarket matrix array real general\n2 2\n1\n4\n4\n3\n"
        np.testing.assert_array_equal(parse_matrix_market(text).entries, [[1.0, 4.0], [4.0, 3.0]])

    def test_array_symmetric(self):
        """Symmetric arrays list the lower triangle by columns."""
        text = "%%MatrixMarket matrix array integer symmetric\n3 3\n1\n2\n3\n4\n5\n6\n"
        np.testing.assert_array_equal(
            parse_matrix_market(text).entries, [[1.0, 2.0, 3.0], [2.0, 4.0, 5.0], [3.0, 5.0, 6.0]]
        )

    @pytest.mark.parametrize("field", ["complex", "pattern"])
    def test_unsupported_field(self, field):
        text = f"%%MatrixMarket matrix coordinate {field} symmetric\n1 1 1\n1 1 1\n"
        with pytest.raises(UnsupportedField):
            parse_matrix_market(text)

    @pytest.mark.parametrize(
        "text, line",
        [
            ("%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1\n", 2),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n", 3),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n", 3),
            ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 abc\n", 3),
            ("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n", 5),
            ("%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 2\n1 1 1\n1 1 2\n", 5),
            ("not a header\n", 1),
        ],
    )
    def test_parse_errors_carry_line(self, text, line):
        """Malformed files fail with the offending line number."""
        with pytest.raises(ParseError) as exc:
            parse_matrix_market(text)
        assert exc.value.line == line

    def test_too_large(self):
        with pytest.raises(MatrixTooLarge):
            parse_matrix_market("%%MatrixMarket matrix coordinate real symmetric\n6000 6000 0\n")


class TestReadVector:
    """Test vector parsing."""

    def test_plain_text(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("3\n2\n1\n0\n-1\n-2\n-3\n")
        np.testing.assert_array_equal(read_vector(path), [3, 2, 1, 0, -1, -2, -3])

    def test_single_value(self):
        np.testing.assert_array_equal(parse_vector("1.5"), [1.5])

    def test_empty(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        with pytest.raises(EmptyVector):
            read_vector(path)

    def test_matrix_market_array(self):
        text = "%%MatrixMarket matrix array real general\n3 1\n1.0\n-2.0\n0.5\n"
        np.testing.assert_array_equal(parse_vector(text), [1.0, -2.0, 0.5])

    def test_matrix_market_not_column(self):
        with pytest.raises(ParseError):
            parse_vector("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n")

    def test_bad_number(self):
        with pytest.raises(ParseError) as exc:
            parse_vector("1\nx\n")
        assert exc.value.line == 2

    def test_invalid_utf8(self, tmp_path):
        """Undecodable bytes raise ParseError on their line."""
        path = tmp_path / "c.txt"
        path.write_bytes(b"1\n2\n\xff\xfe\n")
        with pytest.raises(ParseError) as exc:
            read_vector(path)
        assert exc.value.line == 3
        assert exc.value.path == str(path)

    def test_invalid_utf8_matrix(self, tmp_path):
        path = tmp_path / "H.mtx"
        path.write_bytes(b"%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 \xe9\n")
        with pytest.raises(ParseError) as exc:
            read_matrix_market(path)
        assert exc.value.line == 3


class TestWriters:
    """Test writing matrices and vectors."""

    def test_lower_triangle(self):
        H = make_dense([[2.0, 1.0], [1.0, 0.0]])
        text = format_matrix_market(H)
        assert text.splitlines()[0] == "%%MatrixMarket matrix coordinate real symmetric"
        assert text.splitlines()[1] == "2 2 2"

    def test_random_read_write(self, tmp_path):
        """Reading a written matrix gives back the same entries."""
        rng = np.random.default_rng(50)
        for i in range(20):
            n = int(rng.integers(1, 12))
            a = rng.standard_normal((n, n)) * 10.0 ** rng.uniform(-5, 5)
            H = make_dense(a + a.T)
            path = tmp_path / f"m{i}.mtx"
            write_matrix_market(H, path, comment="random")
            np.testing.assert_array_equal(read_matrix_market(path).entries, H.entries)

    def test_vector_read_write(self, tmp_path):
        v = np.array([0.1, -2.5e-300, 3.0])
        path = tmp_path / "v.mtx"
        write_vector(v, path)
        np.testing.assert_array_equal(read_vector(path), v)

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, st.integers(1, 6).map(lambda n: (n, n)),
                  elements=st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)))
    def test_format_parse_law(self, a):
        """parse(format(H)) == H for any symmetric matrix."""
        H = make_dense(a + a.T)
        np.testing.assert_array_equal(parse_matrix_market(format_matrix_market(H)).entries, H.entries)


class TestProblemInstance:
    """Test problem loading."""

    @pytest.fixture
    def files(self, tmp_path):
        matrix = tmp_path / "example.mtx"
        matrix.write_text(EXAMPLE_MTX)
        c = tmp_path / "c.txt"
        c.write_text("3\n2\n1\n0\n-1\n-2\n-3\n")
        b = tmp_path / "b.txt"
        b.write_text("-3\n-2\n-1\n0\n1\n2\n3\n")
        return matrix, c, b

    def test_load(self, files):
        matrix, c, _ = files
        problem = load_problem(matrix, c)
        assert problem.name == "example"
        assert problem.dimension == 7
        assert problem.source_paths == [str(matrix), str(c)]

    def test_rhs_is_b(self, files):
        """b = -c gives the same c, with no negative zeros."""
        matrix, c, b = files
        from_c = load_problem(matrix, c)
        from_b = load_problem(matrix, b, rhs_is_b=True)
        np.testing.assert_array_equal(from_b.c, from_c.c)
        assert not np.signbit(from_b.c[3])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            ProblemInstance(H=make_diagonal([1.0, 2.0]), c=np.ones(3))

    def test_zero_rhs(self):
        with pytest.raises(ZeroRightHandSide):
            ProblemInstance(H=make_diagonal([1.0, 2.0]), c=np.zeros(2))
