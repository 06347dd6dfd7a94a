import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from fucik.bounds import check_averaging_dirichlet, curve_bounds_check, tau_lem, tau_thm
from fucik.homog import fit_rate
from fucik.oracles import fucik_curve_const, plap_eigen
from fucik.problem import BC, FucikPoint
from fucik.varfem import (
    DiscreteFn, Mesh1D, functional_A, functional_A_shifted, functional_B, rayleigh,
)
from fucik.weights import Constant, PiecewisePeriodic, ScaledWeight, Trig

FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

exponents = st.floats(1.2, 4.0)
positive_s = st.floats(1e-3, 1e3)
seeds = st.integers(0, 2 ** 32 - 1)


@st.composite
def periodic_cells(draw):
    kind = draw(st.sampled_from(["constant", "trig", "piecewise"]))
    if kind == "constant":
        return Constant(draw(st.floats(0.1, 5.0)))
    if kind == "trig":
        a = draw(st.floats(1.0, 5.0))
        return Trig(a, draw(st.floats(-0.9, 0.9)) * a, draw(st.integers(1, 3)))
    vals = draw(st.lists(st.floats(0.1, 5.0), min_size=1, max_size=5))
    return PiecewisePeriodic(tuple(vals))


def random_fn(seed, n=48, bc=None):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n + 1)
    if bc is BC.DIRICHLET:
        v[0] = v[-1] = 0.0
    return DiscreteFn(Mesh1D(0.0, 1.0, n), v, bc)


@FAST
@given(seeds, st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3), exponents)
def test_functionals_homogeneous(seed, c, p):
    u = random_fn(seed)
    m, n = Trig(2, 1, 1), Constant(1.5)
    assert math.isclose(functional_A(u.scaled(c), p), abs(c) ** p * functional_A(u, p), rel_tol=1e-11)
    # B is positively homogeneous; a negative factor swaps u+ and u-
    cp, fb = abs(c), functional_B(u, m, n, 0.7, p)
    assert math.isclose(functional_B(u.scaled(cp), m, n, 0.7, p), cp ** p * fb, rel_tol=1e-11)
    assert math.isclose(functional_B(u.scaled(-cp), m, n, 0.7, p),
                        cp ** p * functional_B(u.scaled(-1.0), m, n, 0.7, p), rel_tol=1e-11)
    assert math.isclose(rayleigh(u.scaled(cp), m, n, 0.7, p), rayleigh(u, m, n, 0.7, p), rel_tol=1e-11)


@FAST
@given(seeds, exponents, periodic_cells())
def test_shift_identity(seed, p, w):
    u = random_fn(seed)
    lhs = functional_A_shifted(u, w, w, p) / functional_B(u, w, w, 1.0, p)
    assert math.isclose(lhs, rayleigh(u, w, w, 1.0, p) + 1.0, rel_tol=1e-13)


@FAST
@given(positive_s)
def test_tau_identity(s):
    assert tau_thm(s) == tau_lem(s) ** 2


@FAST
@given(positive_s, exponents, st.floats(0.2, 5.0), st.sampled_from([BC.DIRICHLET, BC.NEUMANN]))
def test_oracle_scaling(s, p, c, bc):
    a1, b1 = fucik_curve_const(s, p, bc=bc)
    ac, bc_ = fucik_curve_const(s, p, 1.0, c, c, bc)
    assert math.isclose(ac, a1 / c, rel_tol=1e-10) and math.isclose(bc_, b1 / c, rel_tol=1e-10)


@FAST
@given(exponents, st.sampled_from([BC.DIRICHLET, BC.NEUMANN]))
def test_oracle_monotone_in_s(p, bc):
    grid = np.geomspace(0.05, 20, 12)
    pts = [fucik_curve_const(s, p, bc=bc) for s in grid]
    assert all(a2 < a1 for (a1, _), (a2, _) in zip(pts, pts[1:]))
    assert all(b2 > b1 for (_, b1), (_, b2) in zip(pts, pts[1:]))


@FAST
@given(exponents, st.floats(0.2, 5.0))
def test_curve_meets_diagonal_at_second_eigenvalue(p, w):
    assert math.isclose(fucik_curve_const(1.0, p, 1.0, w, w)[0], plap_eigen(2, p, 1.0, BC.DIRICHLET, w),
                        rel_tol=1e-11)


@FAST
@given(positive_s, exponents, st.sampled_from([BC.DIRICHLET, BC.NEUMANN]))
def test_oracle_points_pass_curve_bounds(s, p, bc):
    a, b = fucik_curve_const(s, p, bc=bc)
    pt = FucikPoint.from_alpha(a, s, "oracle", rel_tol=1e-10)
    assert pt.beta == s * pt.alpha
    assert curve_bounds_check(pt, Constant(1), Constant(1), p, bc).passed


@FAST
@given(periodic_cells(), st.floats(0.01, 3.0), st.lists(st.floats(0, 1), min_size=50, max_size=50))
def test_scaled_weight_substitution(cell, eps, xs):
    x = np.array(xs)
    w = ScaledWeight(cell, eps)
    assert np.array_equal(w(x), cell(x / eps))
    assert w.average() == cell.average()
    assert w.lower_bound <= w.average() <= w.upper_bound


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(periodic_cells(), st.integers(2, 40), seeds, exponents)
def test_averaging_dirichlet_random_triples(g, k, seed, p):
    u = random_fn(seed, n=400, bc=BC.DIRICHLET)
    assert check_averaging_dirichlet(g, 1.0 / k, u, p).holds


@FAST
@given(st.floats(1e-3, 1e3), st.floats(0.5, 3.0))
def test_fit_rate_recovers_power(c, q):
    eps = [2.0 ** -k for k in range(3, 8)]
    fit = fit_rate([(e, c * e ** q) for e in eps])
    assert math.isclose(fit.slope, q, rel_tol=1e-9)
    assert 0.0 <= fit.r_squared <= 1.0 + 1e-12
