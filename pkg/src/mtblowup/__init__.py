"""Radial shooting constructions of blowing-up Moser-Trudinger solutions on the unit disk."""

__version__ = "0.1.0"
