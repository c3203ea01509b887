"""Numerical geometry of isodiametric sets in the Heisenberg group."""

__version__ = "0.1.0"
