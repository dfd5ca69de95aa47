"""Topological obstruction checker for compact Clifford-Klein forms."""

__version__ = "0.1.0"
