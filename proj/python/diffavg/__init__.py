"""Diffusion-averaged quantum model.

Thin Python layer over the C++ core: wave functions are complex NumPy vectors
on a uniform position grid, phase-space fields are real (q, p) matrices.
"""
from ._diffavg import *  # noqa: F401,F403
from ._diffavg import lamb  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
