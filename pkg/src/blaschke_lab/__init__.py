"""Finite Blaschke products, model spaces, quotient norms and growth sweeps."""

from ._kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
