"""Enumeration and verification toolkit for 2-neighborly polytopes with few facets."""

from neighborly.incmat import IncidenceMatrix, format_matrix, parse_matrix

__all__ = ["IncidenceMatrix", "format_matrix", "parse_matrix"]
