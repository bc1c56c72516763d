"""Lattice path-space propagators under polygonal Minkowski metrics.

Spacetime lattice paths are counted by their proper length; the Fourier
transform length -> mass of those counts is the propagator.  The package
covers the polygonal metric geometry, exact path-space oracles, the
continuous multinomial limit, free and quotient/orbit propagators,
rapidity-weighted fermionic sums, and Feynman-diagram contributions as
path-volume convolutions, with a CLI (``latticeprop``) over all of it.
"""

from ._core import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
