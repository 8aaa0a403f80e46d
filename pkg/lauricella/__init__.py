"""Deligne-Mostow toolkit for Lauricella hypergeometric functions."""

__version__ = "1.0.0"
