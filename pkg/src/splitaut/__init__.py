"""Exact verification of the automorphism groups of X_0^+(p^2)."""

__version__ = "0.1.0"
