"""Dynamical portraits, squarefree doubly primitive divisors and admissible sets on P^1."""

__version__ = "0.1.0"
