"""Maximal entanglement over symmetric unitary orbits of two- and three-qubit states."""

__version__ = "0.1.0"
