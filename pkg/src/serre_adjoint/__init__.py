"""Serre derivative, its Petersson adjoint, and shifted Dirichlet series."""

__version__ = "0.1.0"
