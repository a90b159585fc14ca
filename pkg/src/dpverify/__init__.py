"""Exact verification toolkit for rational del Pezzo surfaces of degree >= 5."""

__version__ = "0.1.0"
