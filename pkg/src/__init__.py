"""Bounded verification of concurrent game structures with imperfect information."""

__version__ = "0.3.0"
