"""staticlab: a numerical laboratory for radial spacelike graphs in
standard static spacetimes.

The package implements the geometric-analytic machinery of prescribed mean
curvature on radially symmetric static models: curvature assembly, the flux
first integral and its graph solver, barrier constructions, weighted volume
and spectral estimates, a discrete comparison/maximum-principle toolkit, and
a scenario-driven CLI with property-based acceptance suites.
"""

from . import barriers, elliptic, estimates, geometry, graphs, numerics, reporting, tensors

__all__ = [
    "barriers",
    "elliptic",
    "estimates",
    "geometry",
    "graphs",
    "numerics",
    "reporting",
    "tensors",
]

__version__ = "0.1.0"
