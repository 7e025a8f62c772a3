"""Genus-one minimal surfaces from Weierstrass data on the square torus."""

__version__ = "0.1.0"
