"""Tests for unnormalized-krylov."""
