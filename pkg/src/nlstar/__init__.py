"""Stationary states of the cubic nonlinear Schrodinger equation on metric star graphs."""
__version__ = "0.1.0"
