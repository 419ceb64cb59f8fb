"""Summation toolbox for convergent and divergent series."""

__version__ = "0.1.0"
