"""Exact finite-scale workbench for dynamical ideals and permutation models."""

__version__ = "0.1.0"
