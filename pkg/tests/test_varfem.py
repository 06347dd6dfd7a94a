import math

import numpy as np
import pytest

from conftest import FD_TRIG_LAMBDA1
from fucik.errors import DegenerateInput
from fucik.oracles import fucik_curve_const
from fucik.problem import BC, ProblemSpec
from fucik.shoot1d import curve_point_shoot
from fucik.varfem import (
    DiscreteFn, Mesh1D, Path, first_eigenpair_fem, functional_A, functional_A_shifted,
    functional_B, grad_A, grad_B, hat, initial_path, lambda1_fem, mountain_pass_c,
    neumann_shift, node_match_curve, quadrature, rayleigh, solve_plaplace,
)
from fucik.weights import Constant, ScaledWeight, Trig

PI = math.pi
ONE = Constant(1)
MESH = Mesh1D(0.0, 1.0, 64)


def ramp(mesh=MESH):
    return DiscreteFn(mesh, mesh.nodes)


def test_functional_A_examples():
    assert functional_A(ramp(), 2) == pytest.approx(1.0, rel=1e-14)
    assert functional_A(DiscreteFn(MESH, np.zeros(65)), 2) == 0.0
    assert functional_A(hat(MESH), 2) == pytest.approx(4.0, rel=1e-14)


def test_functional_B_examples():
    assert functional_B(ramp(), ONE, ONE, 1.0, 2) == pytest.approx(1 / 3, rel=1e-13)
    assert functional_B(ramp().scaled(-1), ONE, ONE, 1.0, 2) == pytest.approx(1 / 3, rel=1e-13)
    assert functional_B(DiscreteFn(MESH, np.zeros(65)), ONE, ONE, 1.0, 2) == 0.0


def test_functional_A_shifted_examples():
    assert functional_A_shifted(DiscreteFn(MESH, np.ones(65)), ONE, ONE, 2) == pytest.approx(1.0)
    assert functional_A_shifted(DiscreteFn(MESH, np.zeros(65)), ONE, ONE, 2) == 0.0
    assert functional_A_shifted(ramp(), ONE, ONE, 2) == pytest.approx(4 / 3, rel=1e-13)


def test_sign_change_split_is_exact():
    # u = x - 1/3 on a mesh whose nodes miss 1/3: int (u+)^2 = (2/3)^3 / 3
    mesh = Mesh1D(0.0, 1.0, 10)
    u = DiscreteFn(mesh, mesh.nodes - 1 / 3)
    assert functional_B(u, ONE, ONE, 0.0, 2) == pytest.approx((2 / 3) ** 3 / 3, rel=1e-13)
    assert functional_B(u, ONE, ONE, 1.0, 2) - functional_B(u, ONE, ONE, 0.0, 2) == \
        pytest.approx((1 / 3) ** 3 / 3, rel=1e-12)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_gradients_match_finite_differences(p):
    rng = np.random.default_rng(3)
    mesh = Mesh1D(0, 1, 16)
    u = DiscreteFn(mesh, rng.normal(size=17))
    m, n = Trig(2, 1, 1), Constant(1.5)
    d = rng.normal(size=17)
    t = 1e-6
    up, um = DiscreteFn(mesh, u.values + t * d), DiscreteFn(mesh, u.values - t * d)
    fdA = (functional_A(up, p) - functional_A(um, p)) / (2 * t)
    fdB = (functional_B(up, m, n, 2.0, p) - functional_B(um, m, n, 2.0, p)) / (2 * t)
    assert grad_A(u, p) @ d == pytest.approx(fdA, rel=1e-6)
    assert grad_B(u, m, n, 2.0, p) @ d == pytest.approx(fdB, rel=1e-6)


def test_quadrature_resolves_oscillation():
    w = ScaledWeight(Trig(2, 1, 1), 1 / 16)
    q = quadrature(MESH, (w,))
    assert q.subpanels >= math.ceil(10 * MESH.h / w.period)
    # int (2 + sin 32 pi x) x^2 dx = 2/3 - 1/(32 pi)
    assert q.integrate(ramp().values, lambda U: U ** 2, 0) == pytest.approx(2 / 3 - 1 / (32 * PI), rel=1e-12)


def test_stacked_rows_match_single():
    rng = np.random.default_rng(0)
    U = rng.normal(size=(5, 65))
    q = quadrature(MESH, (Trig(2, 1, 1),))
    f = lambda V: np.abs(V) ** 3
    stacked = q.integrate(U, f, 0)
    assert np.allclose(stacked, [q.integrate(r, f, 0) for r in U], rtol=1e-14, atol=0)


def test_discretefn_validation():
    with pytest.raises(DegenerateInput):
        DiscreteFn(MESH, np.ones(64))
    with pytest.raises(DegenerateInput):
        DiscreteFn(MESH, np.ones(65), BC.DIRICHLET)
    with pytest.raises(DegenerateInput):
        DiscreteFn(MESH, np.full(65, np.nan))


def test_plaplace_solve_residual():
    rng = np.random.default_rng(5)
    mesh = Mesh1D(0, 1, 40)
    for p, bc in ((3.0, BC.DIRICHLET), (1.5, BC.MIXED_DN), (2.5, BC.MIXED_ND)):
        load = rng.uniform(0.1, 1.0, 41)
        v = solve_plaplace(mesh, load, p, bc)
        free = np.ones(41, bool)
        free[0], free[-1] = not bc.left_dirichlet, not bc.right_dirichlet
        assert np.all(v[~free] == 0.0)
        r = grad_A(DiscreteFn(mesh, v), p) / p - load
        assert np.max(np.abs(r[free])) < 1e-9 * np.max(load)


def test_lambda1_fem_examples():
    mesh = Mesh1D(0, 1, 1024)
    lam = lambda1_fem(ONE, 2, mesh)
    assert lam == pytest.approx(PI ** 2, rel=5e-5)
    assert lambda1_fem(Constant(2), 2, mesh) == pytest.approx(lam / 2, rel=1e-12)
    res = first_eigenpair_fem(ONE, 2, mesh, BC.NEUMANN)
    assert res.value == 0.0
    assert np.ptp(res.u.values) == 0.0


def test_lambda1_fem_trig_weight():
    assert lambda1_fem(Trig(2, 1, 1), 2, Mesh1D(0, 1, 1024)) == pytest.approx(FD_TRIG_LAMBDA1, rel=5e-5)


@pytest.mark.parametrize("s,node,alpha", [(4.0, 2 / 3, 2.25 * PI ** 2), (1.0, 0.5, 4 * PI ** 2)])
def test_node_match_dirichlet(s, node, alpha):
    pt = node_match_curve(ProblemSpec(2.0), s, n_elems=1024)
    assert pt.node == pytest.approx(node, abs=1e-3)
    assert pt.alpha == pytest.approx(alpha, rel=1e-3)
    assert pt.beta == s * pt.alpha


def test_node_match_neumann_and_shoot_route():
    spec = ProblemSpec(2.0, bc=BC.NEUMANN)
    pt = node_match_curve(spec, 1.0, n_elems=1024)
    assert pt.node == pytest.approx(0.5, abs=1e-3)
    assert pt.alpha == pytest.approx(PI ** 2, rel=1e-3)
    sh = node_match_curve(ProblemSpec(3.0, bc=BC.NEUMANN), 2.0, sub_solver="shoot")
    assert sh.alpha == pytest.approx(fucik_curve_const(2.0, 3.0, bc=BC.NEUMANN)[0], rel=1e-7)


def test_shift_identity_on_fixed_function():
    u = DiscreteFn.from_callable(MESH, lambda x: np.cos(3 * x) - 0.2)
    m = Trig(2, 1, 1)
    lhs = functional_A_shifted(u, m, m, 2.5) / functional_B(u, m, m, 1.0, 2.5)
    assert lhs == pytest.approx(rayleigh(u, m, m, 1.0, 2.5) + 1.0, rel=1e-14)
    assert neumann_shift(3.0, 5.0) == (4.0, 4.0)


def test_initial_path_endpoints():
    U = initial_path(ONE, ONE, 2.0, MESH, BC.DIRICHLET, 16)
    path = Path.from_array(MESH, U, BC.DIRICHLET)
    assert len(path) == 16
    assert np.all(path.waypoints[0].values >= 0) and np.all(path.waypoints[-1].values <= 0)
    with pytest.raises(DegenerateInput):
        Path.from_array(MESH, U[::-1], BC.DIRICHLET)


@pytest.mark.parametrize("bc,target", [(BC.DIRICHLET, 4 * PI ** 2), (BC.NEUMANN, PI ** 2)])
def test_mountain_pass_constant(bc, target):
    r = mountain_pass_c(ONE, ONE, 1.0, 2.0, Mesh1D(0, 1, 128), bc, K=16)
    assert r.value == pytest.approx(target, rel=2e-2)
    assert r.inverse_value * r.value == pytest.approx(1.0, rel=1e-12)
    c = 2.5
    rc = mountain_pass_c(Constant(c), Constant(c), 1.0, 2.0, Mesh1D(0, 1, 128), bc, K=16)
    assert rc.value == pytest.approx(target / c, rel=2e-2)


def test_three_way_agreement():
    mesh = Mesh1D(0, 1, 1024)
    for s in (0.5, 1.0, 2.0):
        spec = ProblemSpec(2.0)
        a_sh = curve_point_shoot(spec, s).alpha
        a_nm = node_match_curve(spec, s, n_elems=1024).alpha
        a_mp = mountain_pass_c(ONE, ONE, s, 2.0, mesh, BC.DIRICHLET, K=16).value
        assert a_nm == pytest.approx(a_sh, rel=1e-3)
        assert a_mp == pytest.approx(a_sh, rel=2e-2)
        assert a_mp == pytest.approx(a_nm, rel=2e-2)


def test_mountain_pass_monotone_in_weights():
    mesh = Mesh1D(0, 1, 128)
    lo = mountain_pass_c(ONE, Trig(2, 1, 1), 2.0, 2.0, mesh, BC.DIRICHLET, K=16).value
    hi_w = mountain_pass_c(Constant(1.2), Trig(2.5, 1, 1), 2.0, 2.0, mesh, BC.DIRICHLET, K=16).value
    assert hi_w <= lo * (1 + 1e-5)


def test_mountain_pass_input_checks():
    with pytest.raises(DegenerateInput):
        mountain_pass_c(ONE, ONE, 1.0, 2.0, MESH, BC.MIXED_DN)
    with pytest.raises(DegenerateInput):
        mountain_pass_c(ONE, ONE, 1.0, 2.0, MESH, BC.DIRICHLET, K=4)
