"""Equilibrium solvers for imperfect-information games."""

__version__ = "0.1.0"
