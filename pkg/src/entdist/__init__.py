"""Desk-scale numerics for entanglement distribution through noisy channels."""

__version__ = "0.1.0"
