"""Exhaustive tabulation of totally real number fields of small root discriminant."""

__version__ = "0.1.0"
