"""Exact computational workbench for quiver Hecke algebras with involution."""

__version__ = "0.1.0"
