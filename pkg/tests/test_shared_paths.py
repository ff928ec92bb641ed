"""Tests for shared path utilities."""
from pathlib import Path

from shared.paths import SolverPaths, ensure_data_dirs, get_data_dir


class TestGetDataDir:
    """Test data directory resolution."""

    def test_default_path(self, monkeypatch):
        """Should use ~/.app-name by default."""
        monkeypatch.delenv("TEST_APP_DATA_DIR", raising=False)
        path = get_data_dir("test-app")
        assert path == Path.home() / ".test-app"

    def test_env_override(self, monkeypatch):
        """Should respect environment variable."""
        monkeypatch.setenv("TEST_APP_DATA_DIR", "/custom/path")
        path = get_data_dir("test-app")
        assert path == Path("/custom/path")

    def test_empty_env_ignored(self, monkeypatch):
        monkeypatch.setenv("TEST_APP_DATA_DIR", "")
        assert get_data_dir("test-app") == Path.home() / ".test-app"


class TestSolverPaths:
    """Test SolverPaths class."""

    def test_directory_paths(self, tmp_path):
        """Should provide correct directory paths."""
        paths = SolverPaths("test-app", data_dir=tmp_path)

        assert paths.data_dir == tmp_path
        assert paths.reports_dir == tmp_path / "reports"
        assert paths.problems_dir == tmp_path / "problems"
        assert paths.logs_dir == tmp_path / "logs"

    def test_report_path(self, tmp_path):
        paths = SolverPaths("test-app", data_dir=tmp_path)
        assert paths.report_path("compatible-minres") == tmp_path / "reports" / "compatible-minres.json"

    def test_env_data_dir(self, tmp_path, monkeypatch):
        """Should pick up the environment override when no directory is given."""
        monkeypatch.setenv("TEST_APP_DATA_DIR", str(tmp_path))
        assert SolverPaths("test-app").data_dir == tmp_path


class TestEnsureDataDirs:
    """Test directory creation."""

    def test_creates_subdirectories(self, tmp_path):
        root = tmp_path / "data"
        ensure_data_dirs(root)
        for name in ["reports", "problems", "logs"]:
            assert (root / name).is_dir()

    def test_idempotent(self, tmp_path):
        ensure_data_dirs(tmp_path)
        ensure_data_dirs(tmp_path)
        assert (tmp_path / "reports").is_dir()
