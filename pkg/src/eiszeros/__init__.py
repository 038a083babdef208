"""Zeros of Eisenstein series for genus-zero groups of Gamma_0(N) type."""

__version__ = "0.1.0"
