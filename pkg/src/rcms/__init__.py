"""Exact enumeration of phi^4 vacuum graphs through RC matrices."""

__version__ = "0.1.0"
