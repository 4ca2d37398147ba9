"""monogeom: numerics for the geometry of charge-1 singular hyperbolic
monopoles and their Euclidean counterparts.

Subpackages by theme: `hyperbolic` (half-space model primitives),
`twistor` (oriented-geodesic space and bidegree sections), `spectral`
(charge-1 factorization and lifts), `moduli` (Gibbons-Hawking and
scalar-flat Kahler metrics with a finite-difference curvature engine),
`minitwistor` (the Euclidean O(2) picture), `symplectic` (deformation
coordinates and the residue/contour pairing), `scattering` (fundamental
solutions, spectral-line detection, growth fits) and `cli`.
"""

from . import (diffgeo, hyperbolic, minitwistor, moduli, projective,
               scattering, spectral, symplectic, twistor)

__all__ = [
    "diffgeo",
    "hyperbolic",
    "minitwistor",
    "moduli",
    "projective",
    "scattering",
    "spectral",
    "symplectic",
    "twistor",
]

__version__ = "0.1.0"
