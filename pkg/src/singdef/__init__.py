"""Exact combinatorics of deformations of cyclic quotient and weighted
homogeneous surface singularities: continued fractions, T-singularities,
P-resolutions, extremal neighborhoods and flips, incidence matrices, and
the picture-deformation runner connecting them.
"""

from . import errors, hjcf, lattice, matrices, mmp, surface, tclass, wpqr

__all__ = [
    "errors",
    "hjcf",
    "lattice",
    "matrices",
    "mmp",
    "surface",
    "tclass",
    "wpqr",
]

__version__ = "0.1.0"
