"""Numerical laboratory for exponential sums over Piatetski-Shapiro primes."""

__version__ = "0.1.0"
