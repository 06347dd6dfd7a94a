"""epsilon-sweeps against the averaged limit problem and empirical rate fits."""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.stats import linregress

from . import bounds
from .errors import DegenerateInput, FucikError, InsufficientData
from .oracles import fucik_curve_const
from .problem import BC, FucikPoint, ProblemSpec
from .shoot1d import curve_point_shoot, lambda1_shoot
from .varfem.node_match import node_match_curve
from .weights import Constant, Weight, scaled

log = logging.getLogger(__name__)

R2_THRESHOLD = 0.99
MIN_FIT_POINTS = 4


@dataclass(frozen=True)
class SweepRecord:
    experiment: str
    method: str
    bc: str
    p: float
    s: float
    epsilon: float
    value_eps: float
    value_limit: float
    abs_error: float
    bound_value: float | None
    within_bound: bool | None
    residual: float = 0.0
    runtime_ms: float = 0.0
    error: str | None = None
    curve_bounds_ok: bool | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    excluded_zero: int = 0
    dropped_largest: bool = False


def _make_record(experiment, method, bc, p, s, eps, value_eps, value_limit, bound,
                 residual=0.0, runtime_ms=0.0, curve_ok=None) -> SweepRecord:
    err = abs(value_eps - value_limit)
    within = None if bound is None else bool(err <= bound)
    return SweepRecord(experiment, method, bc.value, p, s, eps, value_eps, value_limit, err,
                       bound, within, residual, runtime_ms, None, curve_ok)


def _failed_record(experiment, method, bc, p, s, eps, exc, runtime_ms=0.0) -> SweepRecord:
    nan = float("nan")
    return SweepRecord(experiment, method, bc.value, p, s, eps, nan, nan, nan, None, False,
                       nan, runtime_ms, f"{type(exc).__name__}: {exc}")


def _check_eps(eps_list: Sequence[float]) -> list[float]:
    eps = [float(e) for e in eps_list]
    if not eps:
        raise DegenerateInput("empty epsilon list")
    for e in eps:
        if not (0 < e <= 0.5):
            raise DegenerateInput(f"epsilon {e} outside (0, 0.5]")
    return eps


def _check_s(s_list: Sequence[float]) -> list[float]:
    out = [float(s) for s in s_list]
    if not out or any(not s > 0 for s in out):
        raise DegenerateInput("s values must be positive")
    return out


def _run(tasks: list[Callable[[], list[SweepRecord]]], jobs: int) -> list[SweepRecord]:
    if jobs <= 1:
        results = [t() for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda t: t(), tasks))
    records = [r for batch in results for r in batch]
    return sorted(records, key=lambda r: (r.s, r.epsilon, r.experiment))


# eigenvalue sweep -----------------------------------------------------------

def sweep_lambda1(cell: Weight, p: float, bc=BC.DIRICHLET, eps_list: Sequence[float] = (),
                  interval=(0.0, 1.0), jobs: int = 1, h: float | None = None) -> list[SweepRecord]:
    """First eigenvalue with weight ``cell(x/eps)`` against the averaged weight."""
    bc = BC.parse(bc)
    eps_list = _check_eps(eps_list)
    L = interval[1] - interval[0]
    limit = lambda1_shoot(Constant(cell.average(), cell.domain), p, interval, bc)
    C_m = bounds.constant_Cm(p, cell, L)

    def task(eps):
        def run():
            t0 = time.perf_counter()
            try:
                val = lambda1_shoot(scaled(cell, eps), p, interval, bc, h=h)
            except FucikError as exc:
                log.warning("lambda1 sweep failed at eps=%g: %s", eps, exc)
                return [_failed_record("lambda1", "shoot", bc, p, 0.0, eps, exc)]
            ms = 1e3 * (time.perf_counter() - t0)
            return [_make_record("lambda1", "shoot", bc, p, 0.0, eps, val, limit, C_m * eps,
                                 runtime_ms=ms)]
        return run

    return _run([task(e) for e in eps_list], jobs)


# curve sweep ----------------------------------------------------------------

def _curve_point(spec: ProblemSpec, s: float, method: str, n_elems: int,
                 h: float | None) -> FucikPoint:
    if method == "shoot":
        return curve_point_shoot(spec, s, h=h)
    if method == "node_match":
        return node_match_curve(spec, s, "fem", n_elems=n_elems)
    raise DegenerateInput(f"unknown curve method {method!r}")


def neumann_empirical_constant(records: Iterable[SweepRecord]) -> float:
    """Twice the median of ``|error| / ((1+s) tau(s) eps)`` over alpha-records."""
    ratios = [r.abs_error / ((1 + r.s) * bounds.tau_thm(r.s) * r.epsilon)
              for r in records if r.experiment == "curve-alpha" and not r.failed]
    if not ratios:
        return float("nan")
    return 2.0 * float(np.median(ratios))


def sweep_curve(cell_m: Weight, cell_n: Weight, p: float, bc=BC.DIRICHLET,
                s_list: Sequence[float] = (1.0,), eps_list: Sequence[float] = (),
                method: str = "shoot", interval=(0.0, 1.0), jobs: int = 1,
                n_elems: int = 2048, h: float | None = None) -> list[SweepRecord]:
    """Curve points with scaled weights against the constant averaged weights.

    The limit is computed with the same method as the oscillating points,
    so a non-oscillating cell gives exactly zero error.  Dirichlet bounds use the explicit constant ``c (1+s) tau(s) eps``.  The
    Neumann constant has no formula; its bound uses twice the median of the
    normalized errors and the method tag carries ``empirical-c``.
    """
    bc = BC.parse(bc)
    if bc not in (BC.DIRICHLET, BC.NEUMANN):
        raise DegenerateInput("curve sweeps run for Dirichlet or Neumann problems")
    eps_list, s_list = _check_eps(eps_list), _check_s(s_list)
    L = interval[1] - interval[0]
    c = bounds.constant_c_teo2(p, cell_m, cell_n, L)
    tag = method if bc is BC.DIRICHLET else f"{method}/empirical-c"
    limit_spec = ProblemSpec(p, interval, bc, Constant(cell_m.average(), cell_m.domain),
                             Constant(cell_n.average(), cell_n.domain))
    limits = {}
    for s in s_list:
        try:
            limits[s] = _curve_point(limit_spec, s, method, n_elems, h)
        except FucikError as exc:
            limits[s] = exc

    def task(s, eps):
        def run():
            t0 = time.perf_counter()
            m_eps, n_eps = scaled(cell_m, eps), scaled(cell_n, eps)
            try:
                if isinstance(limits[s], FucikError):
                    raise limits[s]
                spec = ProblemSpec(p, interval, bc, m_eps, n_eps)
                point = _curve_point(spec, s, method, n_elems, h)
            except FucikError as exc:
                log.warning("curve sweep failed at s=%g eps=%g: %s", s, eps, exc)
                return [_failed_record(f"curve-{k}", tag, bc, p, s, eps, exc)
                        for k in ("alpha", "beta")]
            ms = 1e3 * (time.perf_counter() - t0)
            a0, b0 = limits[s].alpha, limits[s].beta
            curve_ok = bounds.curve_bounds_check(point, m_eps, n_eps, p, bc, L).passed
            grow = (1 + s) * bounds.tau_thm(s) * eps
            a_bound = None if bc is BC.NEUMANN else c * grow
            b_bound = None if bc is BC.NEUMANN else c * s * grow
            return [
                _make_record("curve-alpha", tag, bc, p, s, eps, point.alpha, a0, a_bound,
                             point.residual, ms, curve_ok),
                _make_record("curve-beta", tag, bc, p, s, eps, point.beta, b0, b_bound,
                             point.residual, ms, curve_ok),
            ]
        return run

    records = _run([task(s, e) for s in s_list for e in eps_list], jobs)
    if bc is BC.NEUMANN:
        c_hat = neumann_empirical_constant(records)
        out = []
        for r in records:
            if r.failed:
                out.append(r)
                continue
            scale = (1 + r.s) * bounds.tau_thm(r.s) * r.epsilon
            bound = c_hat * scale * (r.s if r.experiment == "curve-beta" else 1.0)
            out.append(replace(r, bound_value=bound, within_bound=bool(r.abs_error <= bound)))
        records = out
    return records


# general weak* families -----------------------------------------------------

WeightFamily = Callable[[float], Weight]


def _family(f) -> WeightFamily:
    if callable(f) and not isinstance(f, Weight):
        return f
    return lambda eps: scaled(f, eps)


def sweep_general(m_family, n_family, p: float, bc=BC.DIRICHLET,
                  s_list: Sequence[float] = (1.0,), eps_list: Sequence[float] = (),
                  interval=(0.0, 1.0), jobs: int = 1,
                  m_limit: Weight | None = None, n_limit: Weight | None = None,
                  h: float | None = None) -> list[SweepRecord]:
    """Curve points along eps-indexed weight families against their weak* limits.

    A family is either a callable ``eps -> Weight`` or a template weight
    rescaled with ``weights.scaled``.  The limit weights default to the
    declared weak* limit of the family member and are shot directly, so
    non-constant limits are allowed.  No rate bound is attached.
    """
    bc = BC.parse(bc)
    eps_list, s_list = _check_eps(eps_list), _check_s(s_list)
    mf, nf = _family(m_family), _family(n_family)
    m0 = m_limit if m_limit is not None else mf(eps_list[0]).weak_limit()
    n0 = n_limit if n_limit is not None else nf(eps_list[0]).weak_limit()
    limit_spec = ProblemSpec(p, interval, bc, m0, n0)
    limits = {s: curve_point_shoot(limit_spec, s, h=h) for s in s_list}

    def task(s, eps):
        def run():
            t0 = time.perf_counter()
            try:
                spec = ProblemSpec(p, interval, bc, mf(eps), nf(eps))
                point = curve_point_shoot(spec, s, h=h)
            except FucikError as exc:
                return [_failed_record(f"general-{k}", "shoot", bc, p, s, eps, exc)
                        for k in ("alpha", "beta")]
            ms = 1e3 * (time.perf_counter() - t0)
            lim = limits[s]
            return [
                _make_record("general-alpha", "shoot", bc, p, s, eps, point.alpha, lim.alpha,
                             None, point.residual, ms),
                _make_record("general-beta", "shoot", bc, p, s, eps, point.beta, lim.beta,
                             None, point.residual, ms),
            ]
        return run

    return _run([task(s, e) for s in s_list for e in eps_list], jobs)


# rate fitting ---------------------------------------------------------------

def _ols(eps: np.ndarray, err: np.ndarray):
    res = linregress(np.log(eps), np.log(err))
    return float(res.slope), float(res.intercept), float(res.rvalue ** 2)


def fit_rate(records) -> RateFit:
    """Least-squares slope of log(error) against log(eps).

    Accepts SweepRecords or ``(eps, error)`` pairs.  Zero errors are
    dropped.  If r^2 falls below 0.99 the largest eps is excluded once,
    provided four points remain.
    """
    pairs = [(r.epsilon, r.abs_error) if isinstance(r, SweepRecord) else (float(r[0]), float(r[1]))
             for r in records]
    pairs = [(e, a) for e, a in pairs if math.isfinite(a)]
    zero = sum(1 for _, a in pairs if a <= 0.0)
    if zero:
        log.info("fit_rate: excluding %d zero-error records", zero)
    pairs = sorted((e, a) for e, a in pairs if a > 0.0)
    if len(pairs) < MIN_FIT_POINTS:
        raise InsufficientData(f"need {MIN_FIT_POINTS} positive errors, have {len(pairs)}")
    eps = np.array([e for e, _ in pairs])
    err = np.array([a for _, a in pairs])
    slope, icpt, r2 = _ols(eps, err)
    dropped = False
    if r2 < R2_THRESHOLD and len(pairs) - 1 >= MIN_FIT_POINTS:
        slope, icpt, r2 = _ols(eps[:-1], err[:-1])
        dropped = True
    return RateFit(slope, icpt, r2, len(eps) - int(dropped), zero, dropped)


def fits_by_s(records: Sequence[SweepRecord]) -> dict[tuple[str, float], RateFit]:
    """One rate fit per (experiment, s) group; groups too small to fit are skipped."""
    groups: dict[tuple[str, float], list[SweepRecord]] = {}
    for r in records:
        if not r.failed:
            groups.setdefault((r.experiment, r.s), []).append(r)
    out = {}
    for key, rs in sorted(groups.items()):
        try:
            out[key] = fit_rate(rs)
        except InsufficientData:
            continue
    return out


# large-s endpoint -----------------------------------------------------------

@dataclass(frozen=True)
class EndpointCheck:
    s: float
    epsilon: float
    alpha_eps: float
    alpha_limit: float
    lambda1_eps: float
    lambda1_limit: float
    diff: float
    bound: float

    @property
    def holds(self) -> bool:
        """Consistency with the trivial-line rate, with 1% slack on the limit value."""
        return self.diff <= self.bound

    @property
    def rel_gap_to_lambda1(self) -> float:
        return abs(self.alpha_eps - self.lambda1_eps) / self.lambda1_eps


def endpoint_check(cell_m: Weight, cell_n: Weight, p: float, eps: float, s: float = 1e3,
                   interval=(0.0, 1.0), slack: float = 0.01) -> EndpointCheck:
    """Compare alpha at large s with the first eigenvalue of m (Dirichlet)."""
    L = interval[1] - interval[0]
    m_eps, n_eps = scaled(cell_m, eps), scaled(cell_n, eps)
    point = curve_point_shoot(ProblemSpec(p, interval, BC.DIRICHLET, m_eps, n_eps), s)
    a0, _ = fucik_curve_const(s, p, L, cell_m.average(), cell_n.average(), BC.DIRICHLET)
    lam_eps = lambda1_shoot(m_eps, p, interval)
    lam0 = lambda1_shoot(Constant(cell_m.average(), cell_m.domain), p, interval)
    diff = abs(point.alpha - a0)
    bound = bounds.constant_Cm(p, cell_m, L) * eps + slack * a0
    return EndpointCheck(s, eps, point.alpha, a0, lam_eps, lam0, diff, bound)
