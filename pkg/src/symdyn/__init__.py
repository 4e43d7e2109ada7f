"""Symbolic-dynamics workbench for subshifts over Z and Z^2 and the sliding block
codes between them."""

__version__ = "0.1.0"
