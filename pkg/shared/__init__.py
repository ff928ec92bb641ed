"""Shared utilities for the solver surfaces."""
from .paths import SolverPaths, get_data_dir, ensure_data_dirs

__all__ = [
    "SolverPaths",
    "get_data_dir",
    "ensure_data_dirs",
]
