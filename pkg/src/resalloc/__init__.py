"""Exact solvers and brute-force oracles for constrained resource-allocation problems."""

__version__ = "0.1.0"
