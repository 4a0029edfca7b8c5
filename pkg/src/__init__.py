"""Stochastic Approximation Laboratory.

Simulation and numerical-verification tools for stochastic approximation under
heavy-tailed martingale noise.
"""

__version__ = "1.0.0"
