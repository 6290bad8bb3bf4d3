"""Exact semistability calculus for representations of oriented-tree quivers."""

__version__ = "0.1.0"
