"""Zeta functions of curves over finite fields, computed exactly and cross-checked."""

__version__ = "0.1.0"
