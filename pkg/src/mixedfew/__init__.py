"""Bounds, Gale duality and root counting for mixed fewnomial systems."""

__version__ = "0.1.0"
