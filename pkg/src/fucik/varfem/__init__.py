"""Variational solvers on uniform P1 meshes."""
from .eigen import EigenResult, first_eigenpair_fem, lambda1_fem, solve_plaplace
from .functionals import (
    B_parts,
    functional_A,
    functional_A_shifted,
    functional_B,
    grad_A,
    grad_B,
    neumann_shift,
    rayleigh,
    weighted_norm_p,
)
from .mesh import DiscreteFn, Mesh1D, Quadrature, hat, quadrature
from .mountain import MountainPassResult, Path, initial_path, mountain_pass_c
from .node_match import node_match_curve

__all__ = [
    "B_parts", "DiscreteFn", "EigenResult", "Mesh1D", "MountainPassResult", "Path",
    "Quadrature", "first_eigenpair_fem", "functional_A", "functional_A_shifted",
    "functional_B", "grad_A", "grad_B", "hat", "initial_path", "lambda1_fem",
    "mountain_pass_c", "neumann_shift", "node_match_curve", "quadrature", "rayleigh",
    "solve_plaplace", "weighted_norm_p",
]
