"""First nontrivial curve by splitting the interval at the sign change."""
from __future__ import annotations

import math

from scipy.optimize import brentq

from ..errors import BracketFailure, DegenerateInput, NonConvergence
from ..problem import BC, FucikPoint, ProblemSpec
from .eigen import lambda1_fem
from .mesh import Mesh1D

NODE_XTOL = 1e-10


def _sub_bcs(bc: BC) -> tuple[BC, BC]:
    if bc is BC.DIRICHLET:
        return BC.DIRICHLET, BC.DIRICHLET
    if bc is BC.NEUMANN:
        return BC.MIXED_ND, BC.MIXED_DN
    raise DegenerateInput("node matching is defined for Dirichlet or Neumann problems")


def node_match_curve(spec: ProblemSpec, s: float, sub_solver: str = "fem",
                     n_elems: int = 2048, xtol: float = NODE_XTOL) -> FucikPoint:
    """Find t with ``lambda1(n; (t, b)) = s lambda1(m; (a, t))``.

    The positive part of the curve solution is a first eigenfunction of m
    on ``(a, t)`` and the negative part one of n on ``(t, b)``; both carry
    a Dirichlet condition at the node and the outer condition at the
    boundary.  Each side gets its own uniform mesh of ``n_elems`` elements
    (``sub_solver="fem"``) or is shot (``sub_solver="shoot"``).
    """
    if not s > 0:
        raise DegenerateInput(f"s must be positive, got {s!r}")
    left_bc, right_bc = _sub_bcs(spec.bc)
    a, b = spec.interval
    p = spec.p

    if sub_solver == "fem":
        def lam(w, lo, hi, bc):
            return lambda1_fem(w, p, Mesh1D(lo, hi, n_elems), bc)
        rel_tol = 1e-3
    elif sub_solver == "shoot":
        from ..shoot1d import lambda1_shoot

        def lam(w, lo, hi, bc):
            return lambda1_shoot(w, p, (lo, hi), bc)
        rel_tol = 1e-7
    else:
        raise DegenerateInput(f"unknown sub-solver {sub_solver!r}")

    def mismatch(t):
        return (math.log(lam(spec.n, t, b, right_bc)) - math.log(s)
                - math.log(lam(spec.m, a, t, left_bc)))

    L = b - a
    delta = L / 16.0
    lo, hi = a + delta, b - delta
    f_lo, f_hi = mismatch(lo), mismatch(hi)
    while f_lo > 0 or f_hi < 0:
        delta *= 0.25
        if delta < 1e-9 * L:
            raise BracketFailure(f"no node bracket for s={s}")
        if f_lo > 0:
            lo = a + delta
            f_lo = mismatch(lo)
        if f_hi < 0:
            hi = b - delta
            f_hi = mismatch(hi)
    t, info = brentq(mismatch, lo, hi, xtol=xtol, rtol=1e-15, maxiter=200, full_output=True,
                     disp=False)
    if not info.converged:
        raise NonConvergence(f"node search stopped after {info.iterations} steps")
    alpha = lam(spec.m, a, t, left_bc)
    residual = abs(mismatch(t))
    return FucikPoint.from_alpha(alpha, s, f"node-{sub_solver}", residual=residual, node=t,
                                 rel_tol=rel_tol)
