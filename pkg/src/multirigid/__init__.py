"""Exact certification of multiassociahedron realizations."""

__version__ = "0.1.0"
