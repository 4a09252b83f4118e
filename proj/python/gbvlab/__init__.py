"""Spectral diagnostics for orthogonal polynomials whose recursion
coefficients have generalized bounded variation."""

from ._gbvlab import *  # noqa: F401,F403
from ._gbvlab import __version__  # noqa: F401
