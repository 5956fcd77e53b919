"""Reeb graph realization on closed surfaces and n-manifolds."""

__version__ = "0.1.0"
