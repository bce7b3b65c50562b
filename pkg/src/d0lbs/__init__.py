"""Bispecial factors, forky sets and infinite special branches of D0L-systems."""
__version__ = "0.1.0"
