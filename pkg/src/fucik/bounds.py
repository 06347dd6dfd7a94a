"""Explicit constants, rate factors and inequalities as executable checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput
from .oracles import PTrig, fucik_curve_const, plap_eigen
from .problem import BC, FucikPoint
from .weights import Constant, Weight, scaled

C1_1D = 0.5
CP_CHOICE = "dirichlet"


def _check_s(s: float) -> float:
    s = float(s)
    if not (s > 0 and math.isfinite(s)):
        raise DegenerateInput(f"s must be positive, got {s!r}")
    return s


def tau_lem(s: float) -> float:
    s = _check_s(s)
    return 1.0 if s >= 1.0 else 1.0 / s


def tau_thm(s: float) -> float:
    # square of the inner factor, computed the same way so the identity is exact
    t = tau_lem(s)
    return t * t


def omega(s: float) -> float:
    s = _check_s(s)
    return 1.0 if s >= 1.0 else s


_RATE = {"thm": tau_thm, "lem": tau_lem, "omega": omega}


def rate_factor(s: float, which: str) -> float:
    try:
        fn = _RATE[which]
    except KeyError:
        raise DegenerateInput(f"unknown rate factor {which!r}") from None
    return fn(s)


@dataclass(frozen=True)
class RateFactors:
    s: float
    tau_thm: float
    tau_lem: float
    omega: float

    @classmethod
    def at(cls, s: float) -> "RateFactors":
        return cls(float(s), tau_thm(s), tau_lem(s), omega(s))


def poincare_dirichlet(p: float, L: float = 1.0) -> float:
    """Best constant in ``|u|_p <= c |u'|_p`` on W_0^{1,p} of an interval."""
    return plap_eigen(1, p, L, BC.DIRICHLET, 1.0) ** (-1.0 / p)


def poincare_mean_zero(p: float) -> float:
    """Mean-zero constant on the unit interval, from the first nonzero Neumann eigenvalue."""
    return 1.0 / ((p - 1.0) ** (1.0 / p) * PTrig(p).pi_p)


def constant_Cm(p: float, w: Weight, L: float = 1.0) -> float:
    mu1 = plap_eigen(1, p, L, BC.DIRICHLET, 1.0)
    return (p * C1_1D * w.sup_deviation() * w.upper_bound ** (1.0 / p)
            * w.lower_bound ** (-1.0 / p - 2.0) * mu1 ** (1.0 / p + 1.0))


def constant_c_teo2(p: float, m: Weight, n: Weight, L: float = 1.0) -> float:
    mu2 = plap_eigen(2, p, L, BC.DIRICHLET, 1.0)
    dev = max(m.sup_deviation(), n.sup_deviation())
    inv_low = min(1.0 / m.lower_bound, 1.0 / n.lower_bound)
    return p * C1_1D * poincare_dirichlet(p, L) ** (p - 1.0) * dev * (inv_low * mu2) ** 2


@dataclass(frozen=True)
class RateConstants:
    C_m: float
    C_n: float
    c_teo2: float
    c1: float
    c_p: float
    mu1: float
    mu2: float
    c_p_choice: str = CP_CHOICE

    @classmethod
    def for_weights(cls, p: float, m: Weight, n: Weight, L: float = 1.0) -> "RateConstants":
        return cls(
            C_m=constant_Cm(p, m, L),
            C_n=constant_Cm(p, n, L),
            c_teo2=constant_c_teo2(p, m, n, L),
            c1=C1_1D,
            c_p=poincare_dirichlet(p, L),
            mu1=plap_eigen(1, p, L, BC.DIRICHLET, 1.0),
            mu2=plap_eigen(2, p, L, BC.DIRICHLET, 1.0),
        )

    def as_dict(self) -> dict:
        return dict(self.__dict__)


# curve bounds ---------------------------------------------------------------

def _second_level(p: float, bc: BC, L: float) -> float:
    """Unweighted level bounding alpha(1): mu_2 (Dirichlet) or the first nonzero Neumann one."""
    if bc is BC.NEUMANN:
        return plap_eigen(1, p, L, BC.NEUMANN, 1.0)
    return plap_eigen(2, p, L, BC.DIRICHLET, 1.0)


def curve_upper_bounds(m: Weight, n: Weight, s: float, p: float, bc=BC.DIRICHLET,
                       L: float = 1.0) -> tuple[float, float]:
    """``(alpha, beta)`` upper bounds ``min(1/m-, 1/n-) mu2 tau(s)`` and ``s`` times it."""
    bc = BC.parse(bc)
    top = min(1.0 / m.lower_bound, 1.0 / n.lower_bound) * _second_level(p, bc, L) * tau_lem(s)
    return top, s * top


def curve_lower_bounds(m: Weight, n: Weight, s: float, p: float, bc=BC.DIRICHLET,
                       L: float = 1.0) -> tuple[float, float]:
    """``(alpha, beta)`` lower bounds ``C omega(s) / s`` and ``C omega(s)``, C = c(m+, n+)."""
    bc = BC.parse(bc)
    C = fucik_curve_const(1.0, p, L, m.upper_bound, n.upper_bound, bc)[0]
    w = omega(s)
    return C * w / s, C * w


@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: float
    bound: float
    relation: str
    passed: bool


@dataclass(frozen=True)
class BoundsReport:
    point: FucikPoint
    checks: tuple[BoundCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "alpha": self.point.alpha, "beta": self.point.beta, "s": self.point.s,
            "method": self.point.method, "passed": self.passed,
            "checks": [c.__dict__ for c in self.checks],
        }


def curve_bounds_check(point: FucikPoint, m: Weight, n: Weight, p: float, bc=BC.DIRICHLET,
                       L: float = 1.0) -> BoundsReport:
    """Upper and lower curve bounds for a computed point, with the solver's tolerance as slack."""
    bc = BC.parse(bc)
    s = point.s
    tol = point.rel_tol
    a_hi, b_hi = curve_upper_bounds(m, n, s, p, bc, L)
    a_lo, b_lo = curve_lower_bounds(m, n, s, p, bc, L)
    checks = (
        BoundCheck("beta = s alpha", point.beta, s * point.alpha, "==",
                   point.beta == s * point.alpha),
        BoundCheck("alpha upper", point.alpha, a_hi, "<=", point.alpha <= a_hi * (1 + tol)),
        BoundCheck("beta upper", point.beta, b_hi, "<=", point.beta <= b_hi * (1 + tol)),
        BoundCheck("alpha lower", point.alpha, a_lo, ">=", point.alpha >= a_lo * (1 - tol)),
        BoundCheck("beta lower", point.beta, b_lo, ">=", point.beta >= b_lo * (1 - tol)),
    )
    return BoundsReport(point, checks)


# averaging and Poincare inequalities ----------------------------------------

@dataclass(frozen=True)
class AveragingCheck:
    lhs: float
    rhs: float
    rhs_gradient: float
    holds: bool
    holds_gradient: bool

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.holds))


def _norms(u, p):
    from .varfem.functionals import functional_A
    from .varfem.mesh import quadrature

    q = quadrature(u.mesh, (Constant(1.0, (u.mesh.a, u.mesh.b)),))
    lp = q.integrate(u.values, lambda U: np.abs(U) ** p, 0) ** (1.0 / p)
    grad = functional_A(u, p) ** (1.0 / p)
    return lp, grad


def _oscillation_integral(g: Weight, eps: float, u, f) -> float:
    """``int (g(x / eps) - avg g) f(u(x)) dx``."""
    from .varfem.mesh import quadrature

    q = quadrature(u.mesh, (scaled(g, eps),))
    return q.integrate(u.values, f, 0, offset=g.average())


def check_averaging_dirichlet(g: Weight, eps: float, u, p: float) -> AveragingCheck:
    """Both forms of the oscillating-weight averaging inequality for u vanishing at the ends."""
    if u.values[0] != 0.0 or u.values[-1] != 0.0:
        raise DegenerateInput("the Dirichlet averaging inequality needs u = 0 at both ends")
    lhs = abs(_oscillation_integral(g, eps, u, lambda U: np.abs(U) ** p))
    lp, grad = _norms(u, p)
    dev = g.sup_deviation()
    rhs = p * C1_1D * dev * eps * lp ** (p - 1.0) * grad
    cp = poincare_dirichlet(p, u.mesh.length)
    rhs_grad = p * C1_1D * cp ** (p - 1.0) * dev * eps * grad ** p
    slack = 1e-12 * max(lhs, 1e-300)
    return AveragingCheck(lhs, rhs, rhs_grad, lhs <= rhs + slack, lhs <= rhs_grad + slack)


def check_averaging_neumann(g: Weight, eps: float, u, v, p: float) -> tuple[float, float]:
    """``|int (g(x/eps) - avg g) u v|`` and its ratio to ``eps |u|_{W1,p} |v|_{W1,p'}``."""
    from .varfem.mesh import quadrature

    q = quadrature(u.mesh, (scaled(g, eps),))
    uv = q.sample(u.values) * q.sample(v.values)
    lhs = abs(q.integrate_samples(uv, 0, offset=g.average()))
    pc = p / (p - 1.0)
    lu, gu = _norms(u, p)
    lv, gv = _norms(v, pc)
    denom = eps * (lu ** p + gu ** p) ** (1.0 / p) * (lv ** pc + gv ** pc) ** (1.0 / pc)
    if denom == 0.0:
        return lhs, 0.0
    return lhs, lhs / denom


@dataclass(frozen=True)
class PoincareCheck:
    lhs: float
    rhs: float
    holds: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else 0.0


def check_poincare_scaled(p: float, eps: float, u) -> PoincareCheck:
    """``|u - mean u|_p <= c_p eps |u'|_p`` on a cell of length eps."""
    from .varfem.mesh import quadrature

    if abs(u.mesh.length - eps) > 1e-12 * eps:
        raise DegenerateInput(f"u lives on a cell of length {u.mesh.length}, expected {eps}")
    q = quadrature(u.mesh, (Constant(1.0, (u.mesh.a, u.mesh.b)),))
    mean = q.integrate(u.values, lambda U: U, 0) / eps
    lhs = q.integrate(u.values - mean, lambda U: np.abs(U) ** p, 0) ** (1.0 / p)
    _, grad = _norms(u, p)
    rhs = poincare_mean_zero(p) * eps * grad
    return PoincareCheck(lhs, rhs, lhs <= rhs * (1 + 1e-12))
