"""Simulation and verification of f-implicit max-stable extremal integrals."""

__version__ = "0.1.0"
