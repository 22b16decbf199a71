"""Exact decision procedures for the qubit Clifford hierarchy."""

__version__ = "0.1.0"
