"""Computational descent for finite categories."""

__version__ = "0.1.0"
