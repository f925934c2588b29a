"""Spectral traveling-wave and bifurcation-continuation toolkit for
two-species plasma interface layers."""

__version__ = "0.1.0"
