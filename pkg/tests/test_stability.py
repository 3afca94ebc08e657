import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import eigh_tridiagonal

from cylcrit.curve import GraphCurve, PlanarCurve
from cylcrit.errors import (
    BoundaryMismatch,
    GridTooCoarse,
    HeightNonpositive,
    HypothesisViolated,
    NonZeroBoundary,
    ParameterError,
    StationarityWarning,
)
from cylcrit.families import StationaryParams
from cylcrit.rng import Lcg64
from cylcrit.solvers import InitialData, solve_stationary, solve_stationary_graph_bvp
from cylcrit.stability import (
    JacobiDiscretization,
    apply_jacobi,
    calibration_lhs,
    dirichlet_modes,
    jacobi_identity_check,
    jacobi_potential,
    min_eigenvalue,
    minimizer_compare,
    random_test_functions,
    second_variation,
    second_variation_direct,
    second_variation_substituted,
    stability_report,
    tridiagonal,
)

from exact_curves import catenary_by_arclength

FLAT = StationaryParams(1.0, 1.0, -1.0)


def flat_line(n=1001, length=1.0):
    s = np.linspace(0.0, length, n)
    return PlanarCurve(s, s, np.ones(n), np.zeros(n), np.zeros(n))


def bare_operator(q, s):
    n = s.size
    zeros = np.zeros(n)
    return JacobiDiscretization(s=s, h=s[1] - s[0], q=q, nu=np.ones(n), theta=zeros, z=np.ones(n),
                                kappa=zeros, params=FLAT)


def test_flat_line_potential_and_identity():
    jd = jacobi_potential(flat_line(), FLAT)
    np.testing.assert_array_equal(jd.q, -1.0)
    assert jacobi_identity_check(jd, FLAT) <= 1e-13


def test_flat_line_forms():
    jd = jacobi_potential(flat_line(), FLAT)
    u = np.sin(np.pi * jd.s)
    u[-1] = 0.0
    exact = np.pi**2 / 2 + 0.5
    assert second_variation(jd, u) == pytest.approx(exact, abs=1e-9)
    value, gap = second_variation_substituted(jd, u)
    assert value == pytest.approx(exact, abs=1e-9)
    assert gap <= 1e-10


def test_zero_test_functions():
    jd = jacobi_potential(flat_line(), FLAT)
    assert second_variation(jd, np.zeros(jd.s.size)) == 0.0
    assert second_variation_substituted(jd, np.zeros(jd.s.size)) == (0.0, 0.0)


def test_flat_line_eigenvalue():
    jd = jacobi_potential(flat_line(), FLAT)
    assert min_eigenvalue(jd) == pytest.approx(np.pi**2 + 1, abs=1e-3)


def test_free_dirichlet_eigenvalue():
    s = np.linspace(0.0, np.pi, 1001)
    assert min_eigenvalue(bare_operator(np.zeros_like(s), s)) == pytest.approx(1.0, abs=1e-5)


def test_eigenvalue_matches_dense_solver(drop_graph):
    jd = jacobi_potential(*reversed(drop_graph))
    diag, off = tridiagonal(jd)
    ref = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0), eigvals_only=True)[0]
    assert min_eigenvalue(jd) == pytest.approx(ref, abs=1e-9)


def test_grid_too_coarse():
    s = np.linspace(0.0, 1.0, 11)
    with pytest.raises(GridTooCoarse):
        min_eigenvalue(bare_operator(np.zeros_like(s), s))


def test_jacobi_identity_catenary():
    st_ = StationaryParams(1.0, -2.0, 0.0)
    assert jacobi_identity_check(catenary_by_arclength(-1.5, 1.5, 1e-3), st_) <= 1e-5


def test_jacobi_identity_solved_curve():
    st_ = StationaryParams(1.0, 1.0, 0.0)
    curve = solve_stationary(st_, InitialData(theta0=np.pi), 1.0)
    assert jacobi_identity_check(curve, st_) <= 1e-5


def test_height_guard():
    s = np.linspace(0.0, 1.0, 101)
    below = PlanarCurve(s, s, np.full(101, -1.0), np.zeros(101), np.zeros(101))
    with pytest.raises(HeightNonpositive):
        jacobi_potential(below, StationaryParams(1.0, 0.5, 0.0))


def test_non_stationary_curve_warns():
    with pytest.warns(StationarityWarning):
        jacobi_potential(flat_line(), StationaryParams(1.0, 1.0, 0.0))


def test_nonzero_boundary():
    jd = jacobi_potential(flat_line(), FLAT)
    u = np.ones(jd.s.size)
    for fn in (second_variation, second_variation_direct, second_variation_substituted):
        with pytest.raises(NonZeroBoundary):
            fn(jd, u)


def test_bilinear_consistency(drop_graph):
    st_, g = drop_graph
    jd = jacobi_potential(g, st_)
    rng = Lcg64(3)
    for u, du in random_test_functions(jd.s, rng, 20):
        a = second_variation_direct(jd, u)
        b = second_variation(jd, u)
        c = second_variation(jd, u, du)
        assert abs(a - b) <= 1e-6 * abs(b)
        assert abs(c - b) <= 1e-6 * abs(b)


def test_apply_jacobi_on_modes():
    s = np.linspace(0.0, np.pi, 2001)
    jd = bare_operator(np.zeros_like(s), s)
    u = np.sin(3 * s)
    u[-1] = 0.0
    np.testing.assert_allclose(apply_jacobi(jd, u)[2:-2], -9 * u[2:-2], atol=1e-8)


def test_dirichlet_modes_derivative():
    s = np.linspace(-1.0, 2.0, 3001)
    u, du = dirichlet_modes(s, [0.3, -1.0, 0.5])
    assert u[0] == u[-1] == 0.0
    np.testing.assert_allclose(np.gradient(u, s)[1:-1], du[1:-1], atol=1e-5)


@pytest.mark.parametrize("m, eta, heights", [(1.0, 1.0, (1.0, 1.0)), (2.0, 0.5, (1.0, 1.5)),
                                             (0.5, 1.0, (0.8, 0.8)), (3.0, 0.3, (1.2, 0.9))])
def test_stable_when_eta_and_m_positive(m, eta, heights):
    st_ = StationaryParams(eta, m, 0.0)
    g = solve_stationary_graph_bvp(st_, (-1.0, 1.0), heights, h=1e-3)
    jd = jacobi_potential(g, st_)
    assert min_eigenvalue(jd) >= -1e-6
    rng = Lcg64(11)
    forms = [second_variation(jd, u) for u, _ in random_test_functions(jd.s, rng, 100)]
    assert min(forms) >= -1e-8
    gaps = [second_variation_substituted(jd, w, dw)[1] for w, dw in random_test_functions(jd.s, rng, 20)]
    assert max(gaps) <= 1e-8


def test_stability_report(drop_graph):
    st_, g = drop_graph
    rep = stability_report(g, st_, Lcg64(1), n_tests=10)
    assert rep.lambda_min > 0
    assert rep.identity_residual <= 1e-5
    assert rep.form_gap <= 1e-8
    d = rep.as_dict()
    assert d["meta"]["n_tests"] == 10 and "reduction" in d["meta"]


def test_minimizer_identical_graph(drop_graph):
    st_, f = drop_graph
    res = minimizer_compare(f, st_, f)
    assert res.E_f == res.E_g and res.calib_lhs == 0.0 and res.ok


def test_minimizer_bump(drop_graph):
    st_, f = drop_graph
    bump = 0.1 * (1 - f.x**2)
    g = GraphCurve(f.x, f.f + bump, f.fp - 0.2 * f.x)
    res = minimizer_compare(f, st_, g)
    assert res.E_f < res.E_g
    assert res.ok and res.hypotheses_hold


def test_minimizer_guards(drop_graph):
    st_, f = drop_graph
    shifted = GraphCurve(f.x, f.f + 0.01 * (1 + f.x), f.fp + 0.01)
    with pytest.raises(BoundaryMismatch):
        minimizer_compare(f, st_, shifted)
    coarse = GraphCurve(f.x[::2], f.f[::2], f.fp[::2])
    with pytest.raises(ParameterError):
        minimizer_compare(f, st_, coarse)


def test_minimizer_hypothesis_warning():
    st_ = StationaryParams(1.0, -2.0, 0.0)
    c1 = np.cosh(1.0)
    f = solve_stationary_graph_bvp(st_, (-1.0, 1.0), (c1, c1), h=1e-3, slope_guess=-1.5)
    with pytest.warns(HypothesisViolated):
        res = minimizer_compare(f, st_, f)
    assert not res.hypotheses_hold


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.floats(0.1, 2.0))
def test_calibration_lhs_nonpositive(m, a, b, eta):
    # the fibre integral of a convex power against its tangent line has one sign
    x = np.linspace(0.0, 1.0, 101)
    f = GraphCurve(x, np.full(101, a), np.zeros(101))
    g = GraphCurve(x, np.full(101, b), np.zeros(101))
    assert calibration_lhs(f, g, StationaryParams(eta, m, 0.0)) <= 1e-12


def test_minimizer_no_warnings_for_stationary_graph(drop_graph):
    st_, f = drop_graph
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        minimizer_compare(f, st_, f)
