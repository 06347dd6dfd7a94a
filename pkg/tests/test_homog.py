import math

import numpy as np
import pytest

from fucik.errors import DegenerateInput, InsufficientData
from fucik.homog import (
    SweepRecord, endpoint_check, fit_rate, fits_by_s, sweep_curve, sweep_general, sweep_lambda1,
)
from fucik.problem import BC
from fucik.weights import AffineModulated, Constant, Trig

PI = math.pi
TRIG = Trig(2, 1, 1)


def test_sweep_lambda1_examples():
    recs = sweep_lambda1(TRIG, 2.0, BC.DIRICHLET, [1 / 8, 1 / 16, 1 / 32, 1 / 64])
    assert [r.epsilon for r in recs] == sorted(r.epsilon for r in recs)
    for r in recs:
        assert r.within_bound
        assert r.value_limit == pytest.approx(PI ** 2 / 2, rel=1e-9)
        assert r.abs_error == abs(r.value_eps - r.value_limit)
    assert all(r.abs_error == 0 for r in sweep_lambda1(Constant(2), 2.0, eps_list=[1 / 8, 1 / 16]))
    neu = sweep_lambda1(TRIG, 2.0, BC.NEUMANN, [1 / 8, 1 / 16])
    assert all(r.value_eps == 0 and r.value_limit == 0 for r in neu)


def test_sweep_curve_examples():
    recs = sweep_curve(TRIG, TRIG, 2.0, BC.DIRICHLET, [1.0], [1 / 16])
    a = next(r for r in recs if r.experiment == "curve-alpha")
    b = next(r for r in recs if r.experiment == "curve-beta")
    assert a.value_limit == pytest.approx(2 * PI ** 2, rel=1e-11)
    assert a.value_eps == b.value_eps and a.abs_error == b.abs_error
    assert a.within_bound and b.within_bound and a.curve_bounds_ok
    flat = sweep_curve(Constant(1), Constant(1), 2.0, BC.DIRICHLET, [0.5, 2.0], [1 / 8])
    assert all(r.abs_error == 0 for r in flat)


def test_sweep_curve_neumann_is_flagged():
    recs = sweep_curve(TRIG, TRIG, 2.0, BC.NEUMANN, [1.0], [1 / 8, 1 / 16])
    assert all("empirical-c" in r.method for r in recs)
    assert all(r.within_bound is not None for r in recs)


def test_sweep_general_examples():
    fam = AffineModulated(TRIG, 0.0, 1.0)
    recs = sweep_general(fam, fam, 2.0, BC.DIRICHLET, [1.0], [1 / 8, 1 / 16, 1 / 32])
    errs = [r.abs_error for r in sorted(recs, key=lambda r: -r.epsilon) if r.experiment == "general-alpha"]
    assert errs[0] > errs[1] > errs[2]
    assert all(r.bound_value is None and r.within_bound is None for r in recs)
    flat = AffineModulated(Constant(2), 0.0, 1.0)
    assert all(r.abs_error == 0 for r in sweep_general(flat, flat, 2.0, eps_list=[1 / 8, 1 / 16]))
    one = sweep_general(fam, fam, 2.0, eps_list=[1 / 8])
    assert len([r for r in one if r.experiment == "general-alpha"]) == 1


def test_jobs_do_not_change_records():
    a = sweep_curve(TRIG, TRIG, 2.0, BC.DIRICHLET, [0.5, 2.0], [1 / 8, 1 / 16], jobs=1)
    b = sweep_curve(TRIG, TRIG, 2.0, BC.DIRICHLET, [0.5, 2.0], [1 / 8, 1 / 16], jobs=3)
    strip = lambda rs: [(r.experiment, r.s, r.epsilon, r.value_eps, r.abs_error) for r in rs]
    assert strip(a) == strip(b)


def test_sweep_input_checks():
    with pytest.raises(DegenerateInput):
        sweep_lambda1(TRIG, 2.0, eps_list=[0.75])
    with pytest.raises(DegenerateInput):
        sweep_curve(TRIG, TRIG, 2.0, s_list=[-1.0], eps_list=[0.25])


def test_fit_rate_synthetic():
    eps = [1 / 8, 1 / 16, 1 / 32, 1 / 64]
    f1 = fit_rate([(e, 3 * e) for e in eps])
    assert f1.slope == pytest.approx(1.0, abs=1e-12) and f1.r_squared == pytest.approx(1.0)
    f2 = fit_rate([(e, 0.5 * e ** 2) for e in eps])
    assert f2.slope == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(InsufficientData):
        fit_rate([(e, e) for e in eps[:3]])
    with pytest.raises(InsufficientData):
        fit_rate([(e, 0.0) for e in eps])


def test_fit_rate_drops_largest_once():
    eps = [1 / 4, 1 / 8, 1 / 16, 1 / 32, 1 / 64]
    pairs = [(e, e) for e in eps]
    pairs[0] = (1 / 4, 50.0)
    fit = fit_rate(pairs)
    assert fit.dropped_largest and fit.n_points == 4
    assert fit.slope == pytest.approx(1.0, abs=1e-12)


def test_fits_by_s_groups():
    recs = [SweepRecord("curve-alpha", "shoot", "dirichlet", 2.0, s, e, 0, 0, s * e, 1, True)
            for s in (0.5, 2.0) for e in (1 / 8, 1 / 16, 1 / 32, 1 / 64)]
    fits = fits_by_s(recs)
    assert set(fits) == {("curve-alpha", 0.5), ("curve-alpha", 2.0)}


def test_endpoint_check_record():
    chk = endpoint_check(TRIG, TRIG, 2.0, 1 / 16)
    assert chk.holds
    assert chk.alpha_eps > chk.lambda1_eps
    assert chk.lambda1_limit == pytest.approx(PI ** 2 / 2, rel=1e-9)
