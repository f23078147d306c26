"""Utility functions and helpers."""

from .helpers import file_digest, format_output, random_formula, random_model, random_renaming

__all__ = [
    "file_digest",
    "format_output",
    "random_formula",
    "random_model",
    "random_renaming",
]
