"""Lent particle method: Γ and ♯ of Poisson functionals, with a Monte Carlo harness."""

__version__ = "0.1.0"
