"""Exact Maurer-Cartan calculus in truncated complete free graded Lie algebras."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
