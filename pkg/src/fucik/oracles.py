"""Closed-form ground truth for constant weights on an interval.

With constant weights every solution of the one-dimensional problem is
built from generalized sine arcs.  A positive arc of the equation with
parameter ``lam * w`` has length ``pi_p * ((p - 1) / (lam * w)) ** (1/p)``,
which gives the eigenvalues and the first nontrivial Fucik curve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInput
from .problem import BC


@dataclass(frozen=True)
class PTrig:
    p: float

    def __post_init__(self):
        if not (self.p > 1.0 and math.isfinite(self.p)):
            raise DegenerateInput(f"p must exceed 1, got {self.p!r}")

    @property
    def pi_p(self) -> float:
        p = self.p
        return 2.0 * math.pi / (p * math.sin(math.pi / p))

    def arc_length(self, lam_w: float) -> float:
        """Distance between consecutive zeros for ``-(phi_p(u'))' = lam_w phi_p(u)``."""
        return self.pi_p * ((self.p - 1.0) / lam_w) ** (1.0 / self.p)


def pi_p(p: float) -> float:
    return PTrig(p).pi_p


def _check(p, L, *weights):
    PTrig(p)
    if not L > 0:
        raise DegenerateInput(f"interval length must be positive, got {L!r}")
    for w in weights:
        if not w > 0:
            raise DegenerateInput(f"constant weight must be positive, got {w!r}")


def plap_eigen(k: int, p: float, L: float = 1.0, bc=BC.DIRICHLET, w: float = 1.0) -> float:
    """k-th eigenvalue of ``-(|u'|^{p-2}u')' = lam w |u|^{p-2}u`` on an interval of length L.

    Dirichlet counts from k=1, Neumann from k=0 (``lam_0 = 0``); the mixed
    problems fit ``k - 1/2`` arcs.
    """
    bc = BC.parse(bc)
    _check(p, L, w)
    if int(k) != k:
        raise DegenerateInput("eigenvalue index must be an integer")
    if bc is BC.NEUMANN:
        if k < 0:
            raise DegenerateInput("Neumann eigenvalues are indexed from 0")
        arcs = float(k)
    else:
        if k < 1:
            raise DegenerateInput(f"{bc.value} eigenvalues are indexed from 1")
        arcs = k - 0.5 if bc in (BC.MIXED_ND, BC.MIXED_DN) else float(k)
    return (p - 1.0) * (arcs * pi_p(p) / L) ** p / w


def _arc_sum(alpha, s, p, m, n, scale):
    t = PTrig(p)
    return scale * (t.arc_length(alpha * m) + t.arc_length(s * alpha * n))


def fucik_curve_const(s: float, p: float, L: float = 1.0, m: float = 1.0, n: float = 1.0,
                      bc=BC.DIRICHLET, rtol: float = 1e-12) -> tuple[float, float]:
    """First nontrivial Fucik curve point ``(alpha, s * alpha)`` for constant weights.

    Dirichlet solutions are one positive plus one negative full arc;
    Neumann solutions are two half arcs.  The arc-length equation is
    strictly decreasing in alpha and is solved by bisection in log alpha.
    """
    bc = BC.parse(bc)
    if not s > 0:
        raise DegenerateInput(f"s must be positive, got {s!r}")
    if bc not in (BC.DIRICHLET, BC.NEUMANN):
        raise DegenerateInput("the constant-weight curve is defined for Dirichlet or Neumann")
    _check(p, L, m, n)
    scale = 1.0 if bc is BC.DIRICHLET else 0.5

    def excess(alpha):
        return _arc_sum(alpha, s, p, m, n, scale) - L

    lo, hi = 1e-12, 1e12
    while excess(lo) <= 0:
        lo *= 1e-6
    while excess(hi) >= 0:
        hi *= 1e6
    for _ in range(400):
        mid = math.sqrt(lo * hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi / lo - 1.0 < rtol:
            break
    alpha = math.sqrt(lo * hi)
    return alpha, s * alpha


def fucik_node_const(s: float, p: float, L: float = 1.0, m: float = 1.0, n: float = 1.0,
                     bc=BC.DIRICHLET) -> float:
    """Position (relative to the left end) of the sign change on the curve."""
    bc = BC.parse(bc)
    alpha, _ = fucik_curve_const(s, p, L, m, n, bc)
    scale = 1.0 if bc is BC.DIRICHLET else 0.5
    return scale * PTrig(p).arc_length(alpha * m)
