import math

import numpy as np
import pytest

from conftest import FD_TRIG8_LAMBDA1, FD_TRIG_LAMBDA1, FD_TRIG_LAMBDA2
from fucik.errors import DegenerateInput, StepTooLarge
from fucik.oracles import fucik_curve_const, plap_eigen
from fucik.problem import BC, ProblemSpec
from fucik.shoot1d import (
    curve_point_shoot, integrate, lambda1_shoot, n_steps, solution_profile,
)
from fucik.weights import Constant, PiecewisePeriodic, ScaledWeight, Trig

PI = math.pi
UNIT = ProblemSpec(2.0)


def test_integrate_first_mode():
    tr = integrate(UNIT, PI ** 2, PI ** 2, (0.0, 1.0))
    assert abs(tr.u[-1]) < 1e-9
    assert tr.zero_crossings == ()
    assert np.max(np.abs(tr.u - np.sin(PI * tr.x) / PI)) < 1e-9


def test_integrate_second_mode():
    tr = integrate(UNIT, 4 * PI ** 2, 4 * PI ** 2, (0.0, 1.0))
    assert abs(tr.u[-1]) < 1e-9
    assert len(tr.zero_crossings) == 1
    assert tr.zero_crossings[0] == pytest.approx(0.5, abs=1e-9)


def test_integrate_zero_rhs_is_linear():
    tr = integrate(ProblemSpec(3.0, m=Trig(2, 1, 1)), 0.0, 0.0, (0.0, 1.0))
    assert np.max(np.abs(tr.u - tr.x)) < 1e-12  # sum of steps vs i/n: rounding only
    assert np.all(tr.w == 1.0)


def test_negative_parameters_rejected():
    with pytest.raises(DegenerateInput):
        integrate(UNIT, -1.0, 1.0)


def test_step_policy():
    spec = ProblemSpec(2.0, m=ScaledWeight(Trig(2, 1, 1), 1 / 64))
    assert n_steps(spec) == math.ceil(1 / min(1e-4, (1 / 64) / 20) - 1e-9)
    with pytest.raises(StepTooLarge):
        n_steps(spec, h=0.01)
    # jumps of a piecewise cell land on grid nodes
    pw = ProblemSpec(2.0, m=ScaledWeight(PiecewisePeriodic((1, 3, 2)), 1 / 7))
    assert n_steps(pw) % 21 == 0


def test_lambda1_examples():
    assert lambda1_shoot(Constant(1), 2) == pytest.approx(PI ** 2, rel=1e-10)
    assert lambda1_shoot(Constant(2), 2) == pytest.approx(PI ** 2 / 2, rel=1e-10)
    assert lambda1_shoot(Constant(1), 2, bc=BC.NEUMANN) == 0.0


def test_lambda1_against_finite_differences():
    assert lambda1_shoot(Trig(2, 1, 1), 2) == pytest.approx(FD_TRIG_LAMBDA1, rel=1e-8)
    assert lambda1_shoot(ScaledWeight(Trig(2, 1, 1), 1 / 8), 2) == pytest.approx(FD_TRIG8_LAMBDA1, rel=1e-8)


@pytest.mark.parametrize("bc", [BC.MIXED_ND, BC.MIXED_DN])
@pytest.mark.parametrize("p", [1.5, 3.0])
def test_lambda1_mixed(bc, p):
    assert lambda1_shoot(Constant(1), p, bc=bc) == pytest.approx(plap_eigen(1, p, 1, bc), rel=1e-9)


def test_lambda1_on_shifted_interval():
    got = lambda1_shoot(Constant(1, (1.0, 3.0)), 2, interval=(1.0, 3.0))
    assert got == pytest.approx(PI ** 2 / 4, rel=1e-10)


def test_curve_examples():
    pt = curve_point_shoot(UNIT, 4.0)
    assert pt.alpha == pytest.approx(2.25 * PI ** 2, rel=1e-9)
    assert pt.node == pytest.approx(2 / 3, abs=1e-9)
    assert pt.beta == 4.0 * pt.alpha
    pt = curve_point_shoot(ProblemSpec(2.0, bc=BC.NEUMANN), 1.0)
    assert pt.alpha == pytest.approx(PI ** 2, rel=1e-9)
    assert pt.node == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("c", [0.5, 3.0])
def test_curve_scaling(c):
    spec = ProblemSpec(2.0, m=Constant(c), n=Constant(c))
    assert curve_point_shoot(spec, 2.0).alpha == pytest.approx(fucik_curve_const(2.0, 2)[0] / c, rel=1e-9)


def test_curve_at_s1_is_second_eigenvalue():
    spec = ProblemSpec(2.0, m=Trig(2, 1, 1), n=Trig(2, 1, 1))
    assert curve_point_shoot(spec, 1.0).alpha == pytest.approx(FD_TRIG_LAMBDA2, rel=1e-8)


def test_profile_sign_structure():
    spec = ProblemSpec(3.0, m=Trig(2, 1, 1), n=Constant(1.5))
    pt = curve_point_shoot(spec, 2.0)
    tr = solution_profile(spec, pt)
    assert np.max(np.abs(tr.u)) == pytest.approx(1.0)
    before = tr.u[(tr.x > 1e-3) & (tr.x < pt.node - 1e-3)]
    after = tr.u[(tr.x > pt.node + 1e-3) & (tr.x < 1 - 1e-3)]
    assert np.all(before > 0) and np.all(after < 0)


def test_curve_rejects_mixed_bc():
    with pytest.raises(DegenerateInput):
        curve_point_shoot(ProblemSpec(2.0, bc=BC.MIXED_DN), 1.0)
