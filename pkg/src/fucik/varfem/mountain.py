"""Discrete mountain pass for ``c(m, n) = inf over paths of max A / B``.

A path is a string of K normalized P1 functions joining a nonnegative
endpoint to a nonpositive one.  The hard maximum along the string is
replaced by a log-sum-exp with temperature T, halved every 200
iterations.  Each iteration takes one backtracked step on every waypoint
along the H1-preconditioned gradient of A / B, weighted by the waypoint's
softmax share, projects the endpoints back into their sign cones,
renormalizes and redistributes the waypoints at equal arc length.

The reported value is the maximum of A / B over the piecewise-linear
path refined between waypoints, so it is the value of an admissible
path and bounds the discrete min-max level from above.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from ..errors import DegenerateInput, NonConvergence, PathBroken
from ..problem import BC
from ..weights import Constant, Weight
from .eigen import first_eigenpair_fem
from .functionals import signed_power
from .mesh import DiscreteFn, Mesh1D, quadrature

ANNEAL_EVERY = 200
MAX_ITER = 20_000
GAP_BUDGET = 0.5
REFINE = 16
DENSE = 1024
TOP_SEGMENTS = 3


@dataclass(frozen=True, eq=False)
class Path:
    waypoints: tuple[DiscreteFn, ...]

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise DegenerateInput("a path needs at least two waypoints")
        if np.any(self.waypoints[0].values < 0) or np.any(self.waypoints[-1].values > 0):
            raise DegenerateInput("path must start nonnegative and end nonpositive")

    @classmethod
    def from_array(cls, mesh: Mesh1D, U: np.ndarray, bc: BC) -> "Path":
        return cls(tuple(DiscreteFn(mesh, row, bc) for row in U))

    def as_array(self) -> np.ndarray:
        return np.stack([w.values for w in self.waypoints])

    def __len__(self):
        return len(self.waypoints)


@dataclass(frozen=True, eq=False)
class MountainPassResult:
    value: float
    inverse_value: float
    path: Path
    iterations: int
    temperature: float


class _Energy:
    """Batched A, B, their gradients and the H1 preconditioner."""

    def __init__(self, mesh: Mesh1D, m: Weight, n: Weight, s: float, p: float, bc: BC):
        self.mesh, self.s, self.p, self.bc = mesh, s, p, bc
        self.quad = quadrature(mesh, (m, n))
        self.unit = quadrature(mesh, (Constant(1.0, (mesh.a, mesh.b)),))
        h, N = mesh.h, mesh.n_elems
        self.free = slice(1, N) if bc is BC.DIRICHLET else slice(0, N + 1)
        size = N - 1 if bc is BC.DIRICHLET else N + 1
        ab = np.zeros((3, size))
        ab[0, 1:] = -1.0 / h
        ab[2, :-1] = -1.0 / h
        ab[1, :] = 2.0 / h
        if bc is BC.NEUMANN:
            ab[1, 0] = ab[1, -1] = 1.0 / h
            mass = np.full(size, h)
            mass[0] = mass[-1] = 0.5 * h
            ab[1, :] += mass
        self.ab = ab

    def A(self, U):
        return self.mesh.h * np.sum(np.abs(np.diff(U, axis=1) / self.mesh.h) ** self.p, axis=1)

    def dA(self, U):
        g = signed_power(np.diff(U, axis=1) / self.mesh.h, self.p - 1.0)
        out = np.zeros_like(U)
        out[:, :-1] -= g
        out[:, 1:] += g
        return self.p * out

    def B(self, U):
        p = self.p
        return (self.quad.integrate(U, lambda V: np.maximum(V, 0.0) ** p, 0)
                + self.s * self.quad.integrate(U, lambda V: np.maximum(-V, 0.0) ** p, 1))

    def dB(self, U):
        e = self.p - 1.0
        return self.p * (self.quad.load(U, lambda V: np.maximum(V, 0.0) ** e, 0)
                         - self.s * self.quad.load(U, lambda V: np.maximum(-V, 0.0) ** e, 1))

    def norm_p(self, U):
        """Normalizing functional: A, plus the unweighted L^p mass under Neumann."""
        val = self.A(U)
        if self.bc is BC.NEUMANN:
            val = val + self.unit.integrate(U, lambda V: np.abs(V) ** self.p, 0)
        return val

    def normalize(self, U):
        return U / self.norm_p(U)[:, None] ** (1.0 / self.p)

    def precondition(self, G):
        out = np.zeros_like(G)
        out[:, self.free] = solve_banded((1, 1), self.ab, G[:, self.free].T).T
        return out

    def sobolev_dist(self, D):
        """H1 (semi)norm of each row, matching the preconditioner."""
        h = self.mesh.h
        val = np.sum(np.diff(D, axis=1) ** 2, axis=1) / h
        if self.bc is BC.NEUMANN:
            val = val + h * np.sum(D ** 2, axis=1)
        return np.sqrt(val)


def _softmax_level(R, T):
    top = R.max()
    z = np.exp((R - top) / T)
    return top + T * np.log(z.sum()), z / z.sum()


def _reparametrize(energy: _Energy, U: np.ndarray) -> np.ndarray:
    """Redistribute waypoints at equal arc length along the polygonal string."""
    gaps = energy.sobolev_dist(np.diff(U, axis=0))
    arc = np.concatenate([[0.0], np.cumsum(gaps)])
    if arc[-1] == 0.0:
        return U
    target = np.linspace(0.0, arc[-1], len(U))
    idx = np.clip(np.searchsorted(arc, target, side="right") - 1, 0, len(U) - 2)
    frac = (target - arc[idx]) / np.where(gaps[idx] > 0, gaps[idx], 1.0)
    V = (1 - frac)[:, None] * U[idx] + frac[:, None] * U[idx + 1]
    V[0], V[-1] = U[0], U[-1]
    return energy.normalize(V)


def _segment_points(U: np.ndarray, k: int, tt: np.ndarray) -> np.ndarray:
    return (1 - tt)[:, None] * U[k] + tt[:, None] * U[k + 1]


def _refined_extremes(energy: _Energy, U: np.ndarray, refine: int = REFINE):
    """Max of A/B and min of B/A over the polygonal path.

    Every segment is sampled at ``refine`` points; the segments holding
    the largest samples are then resampled ``DENSE`` times more finely,
    since the maximum sits between waypoints when they straddle the pass.
    """
    tt = np.linspace(0.0, 1.0, refine + 1)
    seg_max = np.empty(len(U) - 1)
    best, inv = 0.0, np.inf
    for k in range(len(U) - 1):
        V = _segment_points(U, k, tt)
        A, B = energy.A(V), energy.B(V)
        seg_max[k] = np.max(A / B)
        inv = min(inv, float(np.min(B / A)))
    best = float(seg_max.max())
    fine = np.linspace(0.0, 1.0, DENSE + 1)
    for k in np.argsort(seg_max)[-TOP_SEGMENTS:]:
        V = _segment_points(U, int(k), fine)
        A, B = energy.A(V), energy.B(V)
        best = max(best, float(np.max(A / B)))
        inv = min(inv, float(np.min(B / A)))
    return best, inv


def initial_path(m: Weight, n: Weight, p: float, mesh: Mesh1D, bc: BC, K: int) -> np.ndarray:
    """``cos(theta) phi+ - sin(theta) phi-`` from half-interval first eigenfunctions."""
    if mesh.n_elems % 2:
        raise DegenerateInput("the mountain-pass mesh needs an even number of elements")
    half = mesh.n_elems // 2
    mid = 0.5 * (mesh.a + mesh.b)
    left_bc = BC.DIRICHLET if bc is BC.DIRICHLET else BC.MIXED_ND
    right_bc = BC.DIRICHLET if bc is BC.DIRICHLET else BC.MIXED_DN
    phi_l = first_eigenpair_fem(m, p, Mesh1D(mesh.a, mid, half), left_bc).u.values
    phi_r = first_eigenpair_fem(n, p, Mesh1D(mid, mesh.b, half), right_bc).u.values
    plus = np.zeros(mesh.n_elems + 1)
    minus = np.zeros(mesh.n_elems + 1)
    plus[: half + 1] = phi_l
    minus[half:] = phi_r
    theta = np.linspace(0.0, 0.5 * np.pi, K)
    c, s = np.cos(theta), np.sin(theta)
    c[-1], s[0] = 0.0, 0.0  # exact sign cones at the ends
    return c[:, None] * plus - s[:, None] * minus


def mountain_pass_c(m: Weight, n: Weight, s: float, p: float, mesh: Mesh1D,
                    bc=BC.DIRICHLET, K: int = 32, max_iter: int = MAX_ITER,
                    rtol: float = 1e-6) -> MountainPassResult:
    """Min-max level of A / B with n replaced by s n."""
    bc = BC.parse(bc)
    if bc not in (BC.DIRICHLET, BC.NEUMANN):
        raise DegenerateInput("the mountain pass is set up for Dirichlet or Neumann")
    if K < 16:
        raise DegenerateInput("use at least 16 waypoints")
    if not s > 0:
        raise DegenerateInput(f"s must be positive, got {s!r}")
    energy = _Energy(mesh, m, n, s, p, bc)
    U = energy.normalize(initial_path(m, n, p, mesh, bc, K))
    U = _reparametrize(energy, U)

    def levels(V):
        A, B = energy.A(V), energy.B(V)
        return A / B, A, B

    R, A, B = levels(U)
    T = max(R.max() - R.min(), 1e-3 * R.max())
    eta = 1.0
    checkpoint = _refined_extremes(energy, U)[0]
    it = 0
    for it in range(1, max_iter + 1):
        F, weights = _softmax_level(R, T)
        grad = (energy.dA(U) - R[:, None] * energy.dB(U)) / B[:, None]
        direction = energy.precondition(grad) * (B / energy.p * weights / weights.max())[:, None]
        mean_gap = float(np.mean(energy.sobolev_dist(np.diff(U, axis=0))))
        move = float(np.max(energy.sobolev_dist(direction)))
        eta = min(eta, 0.5 * mean_gap / move) if move > 0 else eta
        while True:
            V = U - eta * direction
            V[0] = np.maximum(V[0], 0.0)
            V[-1] = np.minimum(V[-1], 0.0)
            V = energy.normalize(V)
            Rv, Av, Bv = levels(V)
            Fv, _ = _softmax_level(Rv, T)
            if Fv <= F or eta < 1e-12:
                break
            eta *= 0.5
        if Fv <= F:
            U, R, A, B = V, Rv, Av, Bv
            eta = min(1.0, 2.0 * eta)
        gaps = energy.sobolev_dist(np.diff(U, axis=0))
        if gaps.max() > GAP_BUDGET:
            raise PathBroken(f"waypoint gap {gaps.max():.3g} exceeds the budget {GAP_BUDGET}")
        U = _reparametrize(energy, U)
        R, A, B = levels(U)
        if it % ANNEAL_EVERY == 0:
            T *= 0.5
            level = _refined_extremes(energy, U)[0]
            if abs(checkpoint - level) <= rtol * level:
                break
            checkpoint = level
    else:
        raise NonConvergence(f"mountain pass did not settle in {max_iter} iterations")
    value, inverse = _refined_extremes(energy, U)
    return MountainPassResult(value, inverse, Path.from_array(mesh, U, bc), it, T)
