"""Improper and clustered colouring of strong products, with spectral certificates."""

__version__ = "0.1.0"
