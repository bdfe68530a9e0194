"""Dual groups, symbols and parameter counts for covers of reductive groups."""

__version__ = "0.1.0"
