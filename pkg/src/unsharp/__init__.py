"""Symmetric unsharp qubit measurements and their trapped-ion realizations."""

__version__ = "0.1.0"
