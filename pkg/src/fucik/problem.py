"""Problem definitions shared by the solvers."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DegenerateInput, DomainError
from .weights import Constant, Weight


class BC(str, enum.Enum):
    """Boundary conditions; mixed ones name the left end first."""

    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    MIXED_ND = "mixed_nd"
    MIXED_DN = "mixed_dn"

    @classmethod
    def parse(cls, value) -> "BC":
        if isinstance(value, BC):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"mixednd": "mixed_nd", "mixeddn": "mixed_dn", "d": "dirichlet", "n": "neumann"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DegenerateInput(f"unknown boundary condition {value!r}") from None

    @property
    def left_dirichlet(self) -> bool:
        return self in (BC.DIRICHLET, BC.MIXED_DN)

    @property
    def right_dirichlet(self) -> bool:
        return self in (BC.DIRICHLET, BC.MIXED_ND)

    @classmethod
    def from_ends(cls, left_dirichlet: bool, right_dirichlet: bool) -> "BC":
        return {
            (True, True): cls.DIRICHLET,
            (False, False): cls.NEUMANN,
            (False, True): cls.MIXED_ND,
            (True, False): cls.MIXED_DN,
        }[(left_dirichlet, right_dirichlet)]


@dataclass(frozen=True)
class ProblemSpec:
    """Exponent, interval, boundary condition and weight pair of a Fucik problem."""

    p: float
    interval: tuple[float, float] = (0.0, 1.0)
    bc: BC = BC.DIRICHLET
    m: Weight = field(default_factory=Constant)
    n: Weight = field(default_factory=Constant)

    def __post_init__(self):
        p = float(self.p)
        if not (p > 1.0 and math.isfinite(p)):
            raise DegenerateInput(f"exponent p must exceed 1, got {self.p!r}")
        a, b = (float(v) for v in self.interval)
        if not a < b:
            raise DegenerateInput(f"empty interval {self.interval!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "interval", (a, b))
        object.__setattr__(self, "bc", BC.parse(self.bc))
        for w in (self.m, self.n):
            w.require_positive()
            lo, hi = w.domain
            if lo > a or hi < b:
                raise DomainError(f"weight domain {w.domain} does not cover {self.interval}")

    @property
    def length(self) -> float:
        return self.interval[1] - self.interval[0]


@dataclass(frozen=True)
class FucikPoint:
    """A point ``(alpha, s * alpha)`` on the first nontrivial curve."""

    alpha: float
    beta: float
    s: float
    method: str
    residual: float = 0.0
    node: float | None = None
    rel_tol: float = 1e-9

    @classmethod
    def from_alpha(cls, alpha: float, s: float, method: str, **kw) -> "FucikPoint":
        return cls(alpha=alpha, beta=s * alpha, s=s, method=method, **kw)
