"""Extactic divisors of planar webs and lines on surfaces, in exact arithmetic."""

__version__ = "0.1.0"
