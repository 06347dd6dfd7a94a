"""Weight functions m, n for the Fucik problem.

Every weight is an immutable value object.  Bounds, averages and the
periodic structure are computed once at construction so that the rate
constants can be evaluated cheaply.  ``w(x)`` evaluates on arrays without
range checks; ``w.eval(x)`` is the checked scalar entry point.

The compiled shooting kernel does not call back into Python: each weight
flattens itself into a small descriptor ``(kind, eps, drift_a, drift_b,
params)`` meaning ``base(x / eps) + drift_a + drift_b * x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import ConfigError, DegenerateInput, DomainError, UnsupportedKind

KIND_CONSTANT = 0
KIND_TRIG = 1
KIND_PIECEWISE = 2
KIND_SAMPLED = 3

TWO_PI = 2.0 * math.pi
_BOUND_SAMPLES = 100_000
_DENSE_GRID = 1024

Domain = tuple[float, float]


def _check_domain(domain) -> Domain:
    a, b = float(domain[0]), float(domain[1])
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise DegenerateInput(f"invalid domain {domain!r}")
    return (a, b)


@dataclass(frozen=True)
class Weight:
    """Common interface.  Subclasses fill in the computed fields."""

    lower_bound: float = field(init=False, repr=False, compare=False)
    upper_bound: float = field(init=False, repr=False, compare=False)

    periodic = False

    def __call__(self, x):
        raise NotImplementedError

    def eval(self, x: float) -> float:
        a, b = self.domain
        if not (a <= x <= b):
            raise DomainError(f"x={x!r} outside {self.domain}")
        return float(self(np.float64(x)))

    def average(self) -> float:
        raise NotImplementedError

    def sup_deviation(self) -> float:
        raise UnsupportedKind(f"{type(self).__name__} has no periodic cell")

    @property
    def period(self) -> float | None:
        """Oscillation length in x, or None for non-oscillating weights."""
        return None

    @property
    def jump_spacing(self) -> float | None:
        """Spacing of the discontinuities of a piecewise weight."""
        return None

    @property
    def is_positive(self) -> bool:
        return self.lower_bound > 0.0

    def require_positive(self) -> "Weight":
        if not self.is_positive:
            raise DegenerateInput(
                f"{self!r} is not bounded away from zero (lower bound {self.lower_bound})"
            )
        return self

    def weak_limit(self) -> "Weight":
        return self

    def descriptor(self) -> tuple[int, float, float, float, np.ndarray]:
        raise NotImplementedError

    def with_domain(self, domain) -> "Weight":
        raise NotImplementedError

    def to_config(self) -> dict[str, Any]:
        raise NotImplementedError

    def _set_bounds(self, lo: float, hi: float) -> None:
        object.__setattr__(self, "lower_bound", float(lo))
        object.__setattr__(self, "upper_bound", float(hi))


@dataclass(frozen=True)
class Constant(Weight):
    c: float = 1.0
    domain: Domain = (0.0, 1.0)

    periodic = True

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "domain", _check_domain(self.domain))
        self._set_bounds(self.c, self.c)

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.c)

    def average(self) -> float:
        return self.c

    def sup_deviation(self) -> float:
        return 0.0

    def descriptor(self):
        return (KIND_CONSTANT, 1.0, 0.0, 0.0, np.array([self.c]))

    def with_domain(self, domain):
        return Constant(self.c, domain)

    def to_config(self):
        return {"kind": "constant", "c": self.c}


@dataclass(frozen=True)
class Trig(Weight):
    """``a + b sin(2 pi k y)`` on the unit cell."""

    a: float = 1.0
    b: float = 0.0
    k: int = 1
    domain: Domain = (0.0, 1.0)

    periodic = True

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DegenerateInput("Trig frequency k must be a positive integer")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "domain", _check_domain(self.domain))
        self._set_bounds(self.a - abs(self.b), self.a + abs(self.b))

    def __call__(self, y):
        return self.a + self.b * np.sin(TWO_PI * self.k * np.asarray(y, dtype=float))

    def average(self) -> float:
        return self.a

    def sup_deviation(self) -> float:
        return abs(self.b)

    @property
    def period(self):
        return None if self.b == 0.0 else 1.0 / self.k

    def descriptor(self):
        return (KIND_TRIG, 1.0, 0.0, 0.0, np.array([self.a, self.b, float(self.k)]))

    def with_domain(self, domain):
        return Trig(self.a, self.b, self.k, domain)

    def to_config(self):
        return {"kind": "trig", "a": self.a, "b": self.b, "k": self.k}


@dataclass(frozen=True)
class PiecewisePeriodic(Weight):
    """Constant on each of ``len(values)`` equal subcells of the unit cell."""

    values: tuple[float, ...] = (1.0,)
    domain: Domain = (0.0, 1.0)

    periodic = True

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DegenerateInput("PiecewisePeriodic needs at least one value")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "domain", _check_domain(self.domain))
        self._set_bounds(min(vals), max(vals))

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        n = len(self.values)
        frac = y - np.floor(y)
        idx = np.minimum((frac * n).astype(np.int64), n - 1)
        return np.asarray(self.values)[idx]

    def average(self) -> float:
        return math.fsum(self.values) / len(self.values)

    def sup_deviation(self) -> float:
        avg = self.average()
        return max(abs(v - avg) for v in self.values)

    @property
    def period(self):
        return None if self.lower_bound == self.upper_bound else 1.0

    @property
    def jump_spacing(self):
        return None if self.period is None else 1.0 / len(self.values)

    def descriptor(self):
        return (KIND_PIECEWISE, 1.0, 0.0, 0.0, np.array(self.values))

    def with_domain(self, domain):
        return PiecewisePeriodic(self.values, domain)

    def to_config(self):
        return {"kind": "piecewise", "values": list(self.values)}


@dataclass(frozen=True)
class Sampled(Weight):
    """Piecewise-linear interpolant of ``values`` on a uniform grid over ``domain``."""

    values: tuple[float, ...] = (1.0, 1.0)
    domain: Domain = (0.0, 1.0)

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise DegenerateInput("Sampled weight needs at least two grid values")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "domain", _check_domain(self.domain))
        self._set_bounds(min(vals), max(vals))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], len(self.values))

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.grid, self.values)

    def average(self) -> float:
        v = np.asarray(self.values)
        return float((v[:-1] + v[1:]).sum() / (2.0 * (len(v) - 1)))

    def sup_deviation(self) -> float:
        if len(self.values) < _DENSE_GRID:
            raise UnsupportedKind(
                f"Sampled weight with {len(self.values)} points is not a dense cell sample"
            )
        avg = self.average()
        return float(np.max(np.abs(np.asarray(self.values) - avg)))

    def descriptor(self):
        params = np.concatenate([[self.domain[0], self.domain[1]], self.values])
        return (KIND_SAMPLED, 1.0, 0.0, 0.0, params)

    def with_domain(self, domain):
        return Sampled(self.values, domain)

    def to_config(self):
        return {"kind": "sampled", "values": list(self.values), "domain": list(self.domain)}


@dataclass(frozen=True)
class ScaledWeight(Weight):
    """``cell(x / epsilon)`` for a periodic cell function."""

    cell: Weight = field(default_factory=Constant)
    epsilon: float = 1.0

    periodic = True

    def __post_init__(self):
        if not isinstance(self.cell, (Constant, Trig, PiecewisePeriodic)):
            raise UnsupportedKind(f"cannot rescale a {type(self.cell).__name__} weight")
        eps = float(self.epsilon)
        if not (eps > 0.0 and math.isfinite(eps)):
            raise DegenerateInput("epsilon must be positive")
        object.__setattr__(self, "epsilon", eps)
        self._set_bounds(self.cell.lower_bound, self.cell.upper_bound)

    @property
    def domain(self) -> Domain:
        return self.cell.domain

    def __call__(self, x):
        return self.cell(np.asarray(x, dtype=float) / self.epsilon)

    def eval(self, x: float) -> float:
        a, b = self.domain
        if not (a <= x <= b):
            raise DomainError(f"x={x!r} outside {self.domain}")
        return float(self.cell(np.float64(x) / self.epsilon))

    def average(self) -> float:
        return self.cell.average()

    def sup_deviation(self) -> float:
        return self.cell.sup_deviation()

    @property
    def period(self):
        per = self.cell.period
        return None if per is None else per * self.epsilon

    @property
    def jump_spacing(self):
        js = self.cell.jump_spacing
        return None if js is None else js * self.epsilon

    def weak_limit(self) -> Weight:
        return Constant(self.cell.average(), self.domain)

    def descriptor(self):
        kind, _, da, db, params = self.cell.descriptor()
        return (kind, self.epsilon, da, db, params)

    def with_domain(self, domain):
        return ScaledWeight(self.cell.with_domain(domain), self.epsilon)

    def to_config(self):
        return {"kind": "scaled", "cell": self.cell.to_config(), "epsilon": self.epsilon}


@dataclass(frozen=True)
class AffineModulated(Weight):
    """``base(x) + a + b x``: a periodic (possibly rescaled) part plus a drift.

    With ``base = ScaledWeight(cell, eps)`` this is an eps-family whose
    weak* limit is ``average(cell) + a + b x``, a non-constant weight.
    """

    base: Weight = field(default_factory=Constant)
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if not isinstance(self.base, (Constant, Trig, PiecewisePeriodic, ScaledWeight)):
            raise UnsupportedKind("AffineModulated base must be periodic")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        x0, x1 = self.domain
        d0, d1 = self.a + self.b * x0, self.a + self.b * x1
        self._set_bounds(self.base.lower_bound + min(d0, d1), self.base.upper_bound + max(d0, d1))

    @property
    def domain(self) -> Domain:
        return self.base.domain

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.base(x) + self.a + self.b * x

    def average(self) -> float:
        x0, x1 = self.domain
        return self.base.average() + self.a + self.b * 0.5 * (x0 + x1)

    @property
    def period(self):
        return self.base.period

    @property
    def jump_spacing(self):
        return self.base.jump_spacing

    def weak_limit(self) -> Weight:
        return AffineModulated(self.base.weak_limit(), self.a, self.b)

    def descriptor(self):
        kind, eps, da, db, params = self.base.descriptor()
        return (kind, eps, da + self.a, db + self.b, params)

    def with_domain(self, domain):
        return AffineModulated(self.base.with_domain(domain), self.a, self.b)

    def to_config(self):
        return {"kind": "affine", "base": self.base.to_config(), "a": self.a, "b": self.b}


def average(w: Weight) -> float:
    return w.average()


def sup_deviation(w: Weight) -> float:
    return w.sup_deviation()


def scaled(cell: Weight, epsilon: float) -> Weight:
    """eps-rescaling that also reaches inside an AffineModulated weight."""
    if isinstance(cell, AffineModulated):
        return AffineModulated(scaled(cell.base, epsilon), cell.a, cell.b)
    if isinstance(cell, Constant):
        return cell
    return ScaledWeight(cell, epsilon)


def sampled_bounds(w: Weight, n: int = _BOUND_SAMPLES) -> tuple[float, float]:
    """Min and max of ``w`` over its domain by dense uniform sampling."""
    x = np.linspace(w.domain[0], w.domain[1], n)
    v = w(x)
    return float(v.min()), float(v.max())


def weight_from_config(cfg: Mapping[str, Any], domain: Domain = (0.0, 1.0)) -> Weight:
    """Build a weight from a tagged record such as ``{kind="trig", a=2, b=1, k=1}``."""
    try:
        kind = str(cfg["kind"]).lower()
        if kind == "constant":
            return Constant(cfg["c"], domain)
        if kind == "trig":
            return Trig(cfg.get("a", 0.0), cfg.get("b", 0.0), cfg.get("k", 1), domain)
        if kind == "piecewise":
            return PiecewisePeriodic(tuple(cfg["values"]), domain)
        if kind == "sampled":
            return Sampled(tuple(cfg["values"]), tuple(cfg.get("domain", domain)))
        if kind == "scaled":
            return ScaledWeight(weight_from_config(cfg["cell"], domain), cfg["epsilon"])
        if kind == "affine":
            return AffineModulated(
                weight_from_config(cfg["base"], domain), cfg.get("a", 0.0), cfg.get("b", 0.0)
            )
    except KeyError as exc:
        raise ConfigError(f"weight record {dict(cfg)!r} is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad weight record {dict(cfg)!r}: {exc}") from None
    raise ConfigError(f"unknown weight kind {cfg.get('kind')!r}")
