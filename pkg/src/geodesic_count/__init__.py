"""Counting arithmetic geodesic segments via ideal correlations in Z[sqrt 2]."""

__version__ = "0.1.0"
