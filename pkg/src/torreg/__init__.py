"""Multigraded regularity of monomial modules over Cox rings of toric varieties."""

__version__ = "0.1.0"
