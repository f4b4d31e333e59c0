"""Biquandle colorings, biquandle brackets and colored tangle functors."""

__version__ = "0.1.0"
