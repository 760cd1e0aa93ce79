"""Discrepancy, distance sums and t-design diagnostics on compact two-point
homogeneous spaces: spheres and the projective spaces over R, C, H, O."""

__version__ = "0.1.0"

from .backend import active_backend
from .jacobi import WeightFunction
from .kernels import MetricKind
from .spaces import Family, Point, PointSet, Space, make_space, parse_space

__all__ = [
    "__version__",
    "active_backend",
    "Family",
    "MetricKind",
    "Point",
    "PointSet",
    "Space",
    "WeightFunction",
    "make_space",
    "parse_space",
]
