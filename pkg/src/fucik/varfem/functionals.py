"""The functionals A, B and the shifted Neumann functional on P1 functions."""
from __future__ import annotations

import numpy as np

from ..weights import Weight
from .mesh import DiscreteFn, quadrature


def signed_power(z, e):
    return np.sign(z) * np.abs(z) ** e


def _pos_pow(e):
    return lambda U: np.maximum(U, 0.0) ** e


def _neg_pow(e):
    return lambda U: np.maximum(-U, 0.0) ** e


def functional_A(u: DiscreteFn, p: float) -> float:
    """``int |u'|^p``, exact for P1 functions."""
    return float(u.mesh.h * np.sum(np.abs(u.slopes) ** p))


def grad_A(u: DiscreteFn, p: float) -> np.ndarray:
    """Nodal gradient of A."""
    g = signed_power(u.slopes, p - 1.0)
    out = np.zeros_like(u.values)
    out[:-1] -= g
    out[1:] += g
    return p * out


def B_parts(u: DiscreteFn, m: Weight, n: Weight, p: float) -> tuple[float, float]:
    """``(int m (u+)^p, int n (u-)^p)``."""
    q = quadrature(u.mesh, (m, n))
    return q.integrate(u.values, _pos_pow(p), 0), q.integrate(u.values, _neg_pow(p), 1)


def functional_B(u: DiscreteFn, m: Weight, n: Weight, s: float, p: float) -> float:
    bm, bn = B_parts(u, m, n, p)
    return bm + s * bn


def grad_B(u: DiscreteFn, m: Weight, n: Weight, s: float, p: float) -> np.ndarray:
    q = quadrature(u.mesh, (m, n))
    return p * (q.load(u.values, _pos_pow(p - 1.0), 0)
                - s * q.load(u.values, _neg_pow(p - 1.0), 1))


def functional_A_shifted(u: DiscreteFn, m: Weight, n: Weight, p: float) -> float:
    """``A(u) + int m (u+)^p + n (u-)^p``, the coercive Neumann numerator."""
    return functional_A(u, p) + functional_B(u, m, n, 1.0, p)


def weighted_norm_p(u: DiscreteFn, w: Weight, p: float) -> float:
    """``int w |u|^p``."""
    q = quadrature(u.mesh, (w,))
    return q.integrate(u.values, lambda U: np.abs(U) ** p, 0)


def rayleigh(u: DiscreteFn, m: Weight, n: Weight, s: float, p: float) -> float:
    return functional_A(u, p) / functional_B(u, m, n, s, p)


def neumann_shift(alpha: float, beta: float) -> tuple[float, float]:
    """Parameters of the shifted Neumann equation ``-D_p u + m (u+)^{p-1} + n (u-)^{p-1} = ...``.

    Moving the added terms to the right-hand side gives
    ``(alpha~ - 1) m (u+)^{p-1} - (beta~ + 1) n (u-)^{p-1}``, so
    ``alpha~ = alpha + 1`` and ``beta~ = beta - 1``.
    """
    return alpha + 1.0, beta - 1.0
