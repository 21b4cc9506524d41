"""Maximally alive Schrödinger-cat states of a qubit entangled with an environment."""

__version__ = "0.1.0"
