"""Exact computer algebra for graded Lie algebras of horospherical varieties."""

__version__ = "0.1.0"
