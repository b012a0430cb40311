"""Exact computations on corner polyhedra and cut-generating functions."""

__version__ = "0.1.0"
