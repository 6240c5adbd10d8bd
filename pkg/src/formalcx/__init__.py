"""Exact algebra for formal complex structures and their operadic encoding."""

__version__ = "0.1.0"
