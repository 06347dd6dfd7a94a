"""Shooting solver for the one-dimensional weighted Fucik problem.

The ODE is integrated in flux form,

    u' = |w|^{1/(p-1)} sign(w),    w' = -alpha m (u+)^{p-1} + beta n (u-)^{p-1},

with fixed-step RK4.  The generalized Prufer angle of ``(u, w)`` is
strictly increasing in x and in the spectral parameters, and every sign
change of u or of w advances it by a quarter turn.  Counting sign changes
therefore gives a monotone predicate for bisection that selects the
branch (first eigenvalue, first nontrivial curve) without any angle
evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .errors import BracketFailure, DegenerateInput, NonConvergence, NonFinite, StepTooLarge
from .kernel import shoot as _shoot
from .oracles import plap_eigen
from .problem import BC, FucikPoint, ProblemSpec
from .weights import Weight

MAX_STEP = 1e-4
ZERO_XTOL = 1e-12
MAX_BISECTIONS = 200
END_ZONE = 1e-8


@dataclass(frozen=True)
class ShotState:
    x: float
    u: float
    w: float

    def du(self, p: float) -> float:
        return math.copysign(abs(self.w) ** (1.0 / (p - 1.0)), self.w)


@dataclass(frozen=True)
class Trajectory:
    x: np.ndarray
    u: np.ndarray
    w: np.ndarray
    zero_crossings: tuple[float, ...]
    degenerate_zeros: tuple[float, ...] = ()

    def __len__(self):
        return len(self.x)

    def state(self, i: int) -> ShotState:
        return ShotState(float(self.x[i]), float(self.u[i]), float(self.w[i]))

    @property
    def final(self) -> ShotState:
        return self.state(-1)


def _feature_lengths(spec: ProblemSpec):
    periods = [w.period for w in (spec.m, spec.n) if w.period is not None]
    jumps = [w.jump_spacing for w in (spec.m, spec.n) if w.jump_spacing is not None]
    return periods, jumps


def n_steps(spec: ProblemSpec, h: float | None = None) -> int:
    """Number of RK4 steps over the interval.

    Default step is ``min(1e-4, period / 20)``.  For piecewise weights the
    step count is rounded up so every jump falls on a grid node; each step
    then sees a single constant value.
    """
    L = spec.length
    periods, jumps = _feature_lengths(spec)
    if h is None:
        h = min([MAX_STEP] + [per / 20.0 for per in periods])
    elif not h > 0:
        raise DegenerateInput("step size must be positive")
    for per in periods:
        if h > per / 10.0:
            raise StepTooLarge(f"step {h} exceeds a tenth of the oscillation period {per}")
    n = max(1, math.ceil(L / h - 1e-9))
    counts = []
    for js in jumps:
        cells = L / js
        offset = spec.interval[0] / js
        if abs(cells - round(cells)) < 1e-9 and abs(offset - round(offset)) < 1e-9:
            counts.append(int(round(cells)))
    if counts:
        block = math.lcm(*counts)
        n = block * math.ceil(n / block)
    return n


def _descs(spec: ProblemSpec):
    mk, meps, mda, mdb, mpar = spec.m.descriptor()
    nk, neps, nda, ndb, npar = spec.n.descriptor()
    return (int(mk), float(meps), float(mda), float(mdb), np.ascontiguousarray(mpar, float),
            int(nk), float(neps), float(nda), float(ndb), np.ascontiguousarray(npar, float))


def initial_state(bc: BC) -> tuple[float, float]:
    """Normalized shot: (u, w) = (0, 1) from a Dirichlet end, (1, 0) from a Neumann end."""
    return (0.0, 1.0) if bc.left_dirichlet else (1.0, 0.0)


def _single_step(spec, alpha, beta, x, u, w, tau):
    """One RK4 step of length tau with the same weight sampling as the kernel."""
    p = spec.p
    q = 1.0 / (p - 1.0)

    def wv(weight: Weight, xx):
        if weight.jump_spacing is not None:
            xx = x + 0.5 * tau
        return float(weight(np.float64(xx)))

    def f(uu, ww, mv, nv):
        du = math.copysign(abs(ww) ** q, ww) if ww else 0.0
        if uu > 0:
            dw = -alpha * mv * uu ** (p - 1.0)
        elif uu < 0:
            dw = beta * nv * (-uu) ** (p - 1.0)
        else:
            dw = 0.0
        return du, dw

    m0, mh, m1 = wv(spec.m, x), wv(spec.m, x + 0.5 * tau), wv(spec.m, x + tau)
    n0, nh, n1 = wv(spec.n, x), wv(spec.n, x + 0.5 * tau), wv(spec.n, x + tau)
    k1 = f(u, w, m0, n0)
    k2 = f(u + 0.5 * tau * k1[0], w + 0.5 * tau * k1[1], mh, nh)
    k3 = f(u + 0.5 * tau * k2[0], w + 0.5 * tau * k2[1], mh, nh)
    k4 = f(u + tau * k3[0], w + tau * k3[1], m1, n1)
    return (u + tau / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            w + tau / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]))


def _refine_zero(spec, alpha, beta, x, u, w, h):
    lo, hi = 0.0, h
    s0 = u > 0
    while hi - lo > ZERO_XTOL:
        mid = 0.5 * (lo + hi)
        um, _ = _single_step(spec, alpha, beta, x, u, w, mid)
        if um == 0.0:
            return x + mid
        if (um > 0) == s0:
            lo = mid
        else:
            hi = mid
    return x + 0.5 * (lo + hi)


def integrate(spec: ProblemSpec, alpha: float, beta: float,
              init: tuple[float, float] | None = None, h: float | None = None) -> Trajectory:
    """Integrate across the whole interval, keeping every sample."""
    if alpha < 0 or beta < 0:
        raise DegenerateInput("alpha and beta must be nonnegative")
    if init is None:
        init = initial_state(spec.bc)
    n = n_steps(spec, h)
    x0, x1 = spec.interval
    us = np.empty(n + 1)
    ws = np.empty(n + 1)
    u, w, _, _, taken, finite = _shoot(spec.p, float(alpha), float(beta), *_descs(spec),
                                       x0, x1, n, float(init[0]), float(init[1]), -1, us, ws)
    if not finite:
        raise NonFinite(f"shot blew up after {taken} of {n} steps")
    xs = x0 + (x1 - x0) * np.arange(n + 1) / n
    hstep = (x1 - x0) / n
    zeros, touching = [], []
    sgn = np.sign(us)
    for i in range(n):
        if sgn[i] != 0 and sgn[i + 1] != 0 and sgn[i] != sgn[i + 1]:
            zeros.append(_refine_zero(spec, alpha, beta, xs[i], us[i], ws[i], hstep))
        elif sgn[i + 1] == 0 and 0 < i + 1 < n:
            before, after = sgn[i], sgn[i + 2]
            if before != 0 and after != 0 and before != after:
                zeros.append(float(xs[i + 1]))
            else:
                touching.append(float(xs[i + 1]))
    # a sign change resolved within END_ZONE of an end is the boundary zero itself
    zone = END_ZONE * (x1 - x0)
    zeros = [z for z in zeros if x0 + zone < z < x1 - zone]
    return Trajectory(xs, us, ws, tuple(zeros), tuple(touching))


class _Shooter:
    """Counts quarter turns of a shot for a given spectral parameter."""

    def __init__(self, spec: ProblemSpec, s: float, quarters: int, h: float | None = None):
        self.spec = spec
        self.s = s
        self.quarters = quarters
        self.n = n_steps(spec, h)
        self.descs = _descs(spec)
        self.init = initial_state(spec.bc)

    def too_far(self, alpha: float) -> bool:
        x0, x1 = self.spec.interval
        u, w, uc, wc, taken, finite = _shoot(self.spec.p, alpha, self.s * alpha, *self.descs,
                                             x0, x1, self.n, self.init[0], self.init[1],
                                             self.quarters)
        if not finite:
            raise NonFinite(f"shot with alpha={alpha} blew up")
        return uc + wc >= self.quarters

    def bisect(self, lo: float, hi: float, rtol: float) -> float:
        if self.too_far(lo):
            raise BracketFailure(f"lower end {lo} already passes the target branch")
        grow = 0
        while not self.too_far(hi):
            hi *= 2.0
            grow += 1
            if grow > 60:
                raise BracketFailure(f"no upper end found above {lo}")
        for _ in range(MAX_BISECTIONS):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if self.too_far(mid):
                hi = mid
            else:
                lo = mid
            if hi - lo <= rtol * lo:
                return 0.5 * (lo + hi)
        if hi - lo <= rtol * lo:
            return 0.5 * (lo + hi)
        raise NonConvergence(f"bisection did not reach rtol={rtol}")


def _quarters(bc: BC, interior_zeros: int) -> int:
    """Quarter turns from the left boundary state to the right one."""
    start = 0 if bc.left_dirichlet else 1
    end = 2 * interior_zeros + (2 if bc.right_dirichlet else 1)
    return end - start


def _end_residual(traj: Trajectory, bc: BC) -> float:
    if bc.right_dirichlet:
        return abs(traj.u[-1]) / max(np.max(np.abs(traj.u)), 1e-300)
    return abs(traj.w[-1]) / max(np.max(np.abs(traj.w)), 1e-300)


def lambda1_shoot(w: Weight, p: float, interval=(0.0, 1.0), bc=BC.DIRICHLET,
                  rtol: float = 1e-12, h: float | None = None) -> float:
    """First eigenvalue of ``-(phi_p(u'))' = lam w phi_p(u)``; 0 for Neumann."""
    bc = BC.parse(bc)
    spec = ProblemSpec(p, interval, bc, w, w)
    if bc is BC.NEUMANN:
        return 0.0
    mu = plap_eigen(1, p, spec.length, bc, 1.0)
    shooter = _Shooter(spec, 1.0, _quarters(bc, 0), h)
    return shooter.bisect(mu / w.upper_bound * (1 - 1e-6), mu / w.lower_bound * (1 + 1e-6), rtol)


def curve_bracket(spec: ProblemSpec, s: float) -> tuple[float, float]:
    """Lower and upper bounds for alpha(s) from the trivial lines and the curve bounds."""
    lo = bounds.curve_lower_bounds(spec.m, spec.n, s, spec.p, spec.bc, spec.length)[0]
    hi = bounds.curve_upper_bounds(spec.m, spec.n, s, spec.p, spec.bc, spec.length)[0]
    if spec.bc is BC.DIRICHLET:
        mu1 = plap_eigen(1, spec.p, spec.length, BC.DIRICHLET, 1.0)
        lo = max(lo, mu1 / spec.m.upper_bound, mu1 / (s * spec.n.upper_bound))
    return lo * (1 - 1e-6), hi * (1 + 1e-6)


def curve_point_shoot(spec: ProblemSpec, s: float, rtol: float = 1e-13,
                      h: float | None = None) -> FucikPoint:
    """Point ``(alpha(s), s alpha(s))`` of the first nontrivial curve."""
    if not s > 0:
        raise DegenerateInput(f"s must be positive, got {s!r}")
    if spec.bc not in (BC.DIRICHLET, BC.NEUMANN):
        raise DegenerateInput("the Fucik curve is computed for Dirichlet or Neumann problems")
    shooter = _Shooter(spec, s, _quarters(spec.bc, 1), h)
    lo, hi = curve_bracket(spec, s)
    alpha = shooter.bisect(lo, hi, rtol)
    traj = integrate(spec, alpha, s * alpha, h=h)
    if len(traj.zero_crossings) != 1:
        raise BracketFailure(
            f"converged shot has {len(traj.zero_crossings)} interior zeros, expected one"
        )
    node = traj.zero_crossings[0]
    residual = _end_residual(traj, spec.bc)
    if residual > 1e-9:
        raise NonConvergence(f"boundary residual {residual:.3e} above 1e-9")
    return FucikPoint.from_alpha(alpha, s, "shoot", residual=residual, node=node, rel_tol=1e-9)


def solution_profile(spec: ProblemSpec, point: FucikPoint, h: float | None = None) -> Trajectory:
    """Trajectory of the curve solution at ``point``, normalized to max |u| = 1."""
    traj = integrate(spec, point.alpha, point.beta, h=h)
    scale = float(np.max(np.abs(traj.u)))
    wscale = scale ** (spec.p - 1.0)
    return Trajectory(traj.x, traj.u / scale, traj.w / wscale,
                      traj.zero_crossings, traj.degenerate_zeros)
