"""Simulations of quantum interference in three-level atoms and beyond."""
__version__ = "0.1.0"
