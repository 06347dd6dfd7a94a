"""Uniform P1 meshes, nodal functions and weighted element quadrature."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import DegenerateInput, QuadratureBudgetExceeded
from ..problem import BC
from ..weights import Constant, Weight

QUADRATURE_BUDGET = 20_000_000
# split panels are graded towards the zero: |u|^e becomes tau^(GRADING e) times a smooth factor
GRADING = 2


@dataclass(frozen=True)
class Mesh1D:
    a: float = 0.0
    b: float = 1.0
    n_elems: int = 1024

    def __post_init__(self):
        if not (self.a < self.b):
            raise DegenerateInput(f"empty mesh interval ({self.a}, {self.b})")
        if int(self.n_elems) != self.n_elems or self.n_elems < 1:
            raise DegenerateInput("n_elems must be a positive integer")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "n_elems", int(self.n_elems))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n_elems

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.n_elems + 1)

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True, eq=False)
class DiscreteFn:
    """Nodal values of a continuous piecewise-linear function."""

    mesh: Mesh1D
    values: np.ndarray
    bc: BC | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.mesh.n_elems + 1,):
            raise DegenerateInput(
                f"expected {self.mesh.n_elems + 1} nodal values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise DegenerateInput("nodal values must be finite")
        bc = None if self.bc is None else BC.parse(self.bc)
        if bc is not None:
            if bc.left_dirichlet and vals[0] != 0.0:
                raise DegenerateInput("Dirichlet function must vanish at the left end")
            if bc.right_dirichlet and vals[-1] != 0.0:
                raise DegenerateInput("Dirichlet function must vanish at the right end")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "bc", bc)

    @classmethod
    def from_callable(cls, mesh: Mesh1D, f, bc=None) -> "DiscreteFn":
        vals = np.asarray(f(mesh.nodes), dtype=float)
        bc = None if bc is None else BC.parse(bc)
        if bc is not None:
            vals = vals.copy()
            if bc.left_dirichlet:
                vals[0] = 0.0
            if bc.right_dirichlet:
                vals[-1] = 0.0
        return cls(mesh, vals, bc)

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.mesh.nodes, self.values)

    def scaled(self, c: float) -> "DiscreteFn":
        return DiscreteFn(self.mesh, c * self.values, self.bc)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.mesh.h


def hat(mesh: Mesh1D, bc=BC.DIRICHLET) -> DiscreteFn:
    """Sine-like tent profile: distance to the Dirichlet ends, capped by symmetry."""
    bc = BC.parse(bc)
    x = mesh.nodes
    if bc is BC.DIRICHLET:
        v = np.minimum(x - mesh.a, mesh.b - x)
    elif bc is BC.MIXED_ND:
        v = mesh.b - x
    elif bc is BC.MIXED_DN:
        v = x - mesh.a
    else:
        v = np.ones_like(x)
    return DiscreteFn(mesh, v / np.max(np.abs(v)), bc)


def _gauss(order: int):
    g, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (g + 1.0), 0.5 * w


def _min_period(weights) -> float | None:
    per = [w.period for w in weights if w.period is not None]
    return min(per) if per else None


class Quadrature:
    """Composite Gauss rule on every element, resolving weight oscillations.

    Each element is cut into ``ceil(10 h / period)`` subpanels (at least
    one) carrying an ``order``-point Gauss rule.  Elements on which the P1
    function changes sign are re-integrated with the rule split at the
    exact zero of the interpolant, so ``u+`` and ``u-`` are smooth on every
    panel.  The split panels are graded quadratically towards the zero to
    tame the ``|u|^(p-1)`` root singularity of loads for ``p < 2``.
    """

    def __init__(self, mesh: Mesh1D, weights: tuple[Weight, ...], order: int = 4):
        self.mesh = mesh
        self.weights = weights
        period = _min_period(weights)
        self.subpanels = 1 if period is None else max(1, math.ceil(10.0 * mesh.h / period))
        npts = mesh.n_elems * self.subpanels * order
        if npts > QUADRATURE_BUDGET:
            raise QuadratureBudgetExceeded(
                f"{npts} quadrature points needed, budget is {QUADRATURE_BUDGET}"
            )
        g, gw = _gauss(order)
        S = self.subpanels
        self.t = ((np.arange(S)[:, None] + g[None, :]) / S).ravel()
        self.wt = np.tile(gw / S, S)
        g2, gw2 = _gauss(2 * order)  # graded split panels get a richer rule
        self.ts = ((np.arange(S)[:, None] + g2[None, :]) / S).ravel()
        self.wts = np.tile(gw2 / S, S)
        e = np.arange(mesh.n_elems)[:, None]
        x = mesh.a + mesh.h * (e + self.t[None, :])
        self.wvals = tuple(self._wval(w, x) for w in weights)

    @staticmethod
    def _wval(w: Weight, x):
        if isinstance(w, Constant):
            return w.c
        return w(x)

    def _split(self, U: np.ndarray):
        """Rows, elements, points and weights of the sign-changing elements."""
        rows, cross = np.nonzero(U[:, :-1] * U[:, 1:] < 0.0)
        if cross.size == 0:
            return rows, cross, None, None, None
        ul, ur = U[rows, cross], U[rows, cross + 1]
        r = (ul / (ul - ur))[:, None]
        k = GRADING
        tau, wtau = self.ts, self.wts
        t = np.concatenate([r * (1 - (1 - tau) ** k), r + (1 - r) * tau ** k], axis=1)
        wt = np.concatenate([r * k * (1 - tau) ** (k - 1) * wtau,
                             (1 - r) * k * tau ** (k - 1) * wtau], axis=1)
        x = self.mesh.a + self.mesh.h * (cross[:, None] + t)
        wv = tuple(self._wval(w, x) for w in self.weights)
        return rows, cross, t, wt, wv

    def _regular(self, U: np.ndarray, f, wi: int, offset: float = 0.0):
        """Integrand on the unsplit rule with sign-changing elements zeroed."""
        vals = U[:, :-1, None] * (1 - self.t) + U[:, 1:, None] * self.t
        integrand = (self.wvals[wi] - offset) * f(vals) * self.wt
        integrand[U[:, :-1] * U[:, 1:] < 0.0] = 0.0
        return integrand

    def integrate(self, u: np.ndarray, f, wi: int = 0, offset: float = 0.0):
        """``int (weight_wi(x) - offset) f(u(x)) dx`` for a P1 function (or a stack of them)."""
        U = np.atleast_2d(u)
        total = self._regular(U, f, wi, offset).sum(axis=(1, 2))
        rows, cross, t, wt, wv = self._split(U)
        if cross.size:
            vals = U[rows, cross][:, None] * (1 - t) + U[rows, cross + 1][:, None] * t
            np.add.at(total, rows, np.sum((wv[wi] - offset) * f(vals) * wt, axis=1))
        total *= self.mesh.h
        return float(total[0]) if np.ndim(u) == 1 else total

    def sample(self, u: np.ndarray) -> np.ndarray:
        """Values of a P1 function at the unsplit quadrature points, shape (n_elems, Q)."""
        return u[:-1, None] * (1 - self.t) + u[1:, None] * self.t

    def integrate_samples(self, vals: np.ndarray, wi: int | None = None,
                          offset: float = 0.0) -> float:
        """Integral of point values given on the unsplit rule, optionally weighted."""
        if wi is not None:
            vals = (self.wvals[wi] - offset) * vals
        return float(np.sum(vals * self.wt) * self.mesh.h)

    def load(self, u: np.ndarray, f, wi: int = 0) -> np.ndarray:
        """Nodal vector ``int weight_wi(x) f(u(x)) psi_i(x) dx`` (row-wise for stacks)."""
        U = np.atleast_2d(u)
        integrand = self._regular(U, f, wi)
        out = np.zeros_like(U)
        out[:, :-1] += integrand @ (1 - self.t)
        out[:, 1:] += integrand @ self.t
        rows, cross, t, wt, wv = self._split(U)
        if cross.size:
            vals = U[rows, cross][:, None] * (1 - t) + U[rows, cross + 1][:, None] * t
            integrand = wv[wi] * f(vals) * wt
            np.add.at(out, (rows, cross), np.sum(integrand * (1 - t), axis=1))
            np.add.at(out, (rows, cross + 1), np.sum(integrand * t, axis=1))
        out *= self.mesh.h
        return out[0] if np.ndim(u) == 1 else out


@lru_cache(maxsize=64)
def quadrature(mesh: Mesh1D, weights: tuple[Weight, ...], order: int = 4) -> Quadrature:
    return Quadrature(mesh, weights, order)
