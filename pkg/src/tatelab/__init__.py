"""Exact p-adic, adelic and finite-field computations for local and global zeta functions."""

__version__ = "0.1.0"
