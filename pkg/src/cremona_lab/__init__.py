"""Exact computations with quadratic plane transformations, blowup towers and ramification."""

__version__ = "0.1.0"
