"""First eigenvalue of the weighted P1 p-Laplacian by inverse iteration.

Each iteration solves the discrete problem ``A'(v) / p = int w phi_p(u) psi_i``
exactly.  In one dimension the element fluxes ``phi_p(v')`` satisfy a
first-order recursion across the nodes, so the solve is a cumulative sum
plus, for two Dirichlet ends, a scalar root for the flux constant.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import DegenerateInput, NonConvergence
from ..problem import BC
from ..weights import Weight
from .functionals import functional_A, signed_power
from .mesh import DiscreteFn, Mesh1D, hat, quadrature

MAX_ITER = 100_000


def solve_plaplace(mesh: Mesh1D, load: np.ndarray, p: float, bc=BC.DIRICHLET) -> np.ndarray:
    """Nodal solution of ``A'(v) / p = load`` at the free nodes."""
    bc = BC.parse(bc)
    if bc is BC.NEUMANN:
        raise DegenerateInput("the pure Neumann problem has no unique solution")
    q = 1.0 / (p - 1.0)
    h = mesh.h
    b = np.asarray(load, dtype=float)
    if bc is BC.DIRICHLET:
        cum = np.concatenate([[0.0], np.cumsum(b[1:-1])])
        lo, hi = cum.min(), cum.max()
        if lo == hi:
            c = lo
        else:
            c = brentq(lambda c: float(np.sum(signed_power(c - cum, q))), lo, hi,
                       xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        flux = c - cum
    elif bc is BC.MIXED_ND:
        flux = -np.cumsum(b[:-1])
    else:
        flux = np.cumsum(b[::-1])[::-1][1:]
    slope = signed_power(flux, q)
    if bc is BC.MIXED_ND:
        return np.concatenate([-h * np.cumsum(slope[::-1])[::-1], [0.0]])
    v = np.concatenate([[0.0], h * np.cumsum(slope)])
    if bc is BC.DIRICHLET:
        v[-1] = 0.0
    return v


@dataclass(frozen=True)
class EigenResult:
    value: float
    u: DiscreteFn
    iterations: int


def first_eigenpair_fem(w: Weight, p: float, mesh: Mesh1D, bc=BC.DIRICHLET,
                        tol: float = 1e-13, max_iter: int = MAX_ITER) -> EigenResult:
    """Eigenvalue and positive eigenfunction with ``int w |u|^p = 1``."""
    bc = BC.parse(bc)
    if bc is BC.NEUMANN:
        q = quadrature(mesh, (w,))
        ones = np.ones(mesh.n_elems + 1)
        c = q.integrate(ones, lambda U: np.abs(U) ** p, 0) ** (-1.0 / p)
        return EigenResult(0.0, DiscreteFn(mesh, c * ones, bc), 0)
    q = quadrature(mesh, (w,))
    u = hat(mesh, bc).values
    lam_old = np.inf
    for it in range(1, max_iter + 1):
        load = q.load(u, lambda U: signed_power(U, p - 1.0), 0)
        v = solve_plaplace(mesh, load, p, bc)
        v /= q.integrate(v, lambda U: np.abs(U) ** p, 0) ** (1.0 / p)
        lam = functional_A(DiscreteFn(mesh, v), p)
        change = np.max(np.abs(v - u)) / np.max(np.abs(v))
        u = v
        if abs(lam_old - lam) <= tol * lam and change <= 1e-6:
            return EigenResult(lam, DiscreteFn(mesh, u, bc), it)
        lam_old = lam
    raise NonConvergence(f"inverse iteration did not settle in {max_iter} steps")


def lambda1_fem(w: Weight, p: float, mesh: Mesh1D, bc=BC.DIRICHLET, **kw) -> float:
    return first_eigenpair_fem(w, p, mesh, bc, **kw).value
