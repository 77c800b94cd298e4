"""Algebraic security of random linear network coding over GF(2^m)."""

__version__ = "0.1.0"
