"""Weighted Fucik spectrum of the one-dimensional p-Laplacian and the
homogenization of its first nontrivial curve under oscillating weights."""
from .errors import FucikError
from .kernel import BACKEND
from .problem import BC, FucikPoint, ProblemSpec
from .weights import AffineModulated, Constant, PiecewisePeriodic, Sampled, ScaledWeight, Trig

__all__ = [
    "BACKEND", "BC", "FucikError", "FucikPoint", "ProblemSpec",
    "AffineModulated", "Constant", "PiecewisePeriodic", "Sampled", "ScaledWeight", "Trig",
]
__version__ = "0.1.0"
