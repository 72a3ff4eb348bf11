"""Exact constructions and colourings for d-directional segment graphs."""

__version__ = "0.1.0"
