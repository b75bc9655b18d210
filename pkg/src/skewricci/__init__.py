"""Numerical verification of surface connections with skew-symmetric Ricci
tensor and of their Riemann extensions."""

__version__ = "0.1.0"
