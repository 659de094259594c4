"""Exact group-theoretic verification of CM-type class-function identities
and double-transitivity certificates."""

__version__ = "0.1.0"
