import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import cumulative_trapezoid

from cylcrit.curve import GraphCurve, PlanarCurve, graph_from_function
from cylcrit.energies import (
    EnergyValue,
    closed_flux_identity,
    cylinder_willmore_energy,
    elastic_energy,
    graph_potential_energy,
    tangential_closure_check,
    weighted_area_energy,
)
from cylcrit.errors import DivergentVolume, DomainViolation, HeightNonpositive, MExcluded, RequiresClosed
from cylcrit.families import Exp, Log, Power, SingularParams, StationaryParams, WillmoreParams

from exact_curves import catenary_by_arclength, clockwise_circle


def segment(length=2.0, n=201):
    s = np.linspace(0.0, length, n)
    return PlanarCurve(s, s, np.ones(n), np.zeros(n), np.zeros(n))


def ccw_circle(n=2000):
    t = np.linspace(0.0, 2 * np.pi, n + 1)
    return PlanarCurve(t, np.cos(t), 2 + np.sin(t), t + np.pi / 2, np.ones_like(t))


def wobbly_loop(a=0.3, scale=1.0, cx=0.0, cz=3.0, n=4096, fine=64):
    """Closed curve with ``theta = s + a sin 2s``, positions by fine cumulative integration."""
    L = 2 * np.pi
    sf = np.linspace(0.0, L, n * fine + 1)
    th = sf + a * np.sin(2 * sf)
    x = cumulative_trapezoid(np.cos(th), sf, initial=0.0)
    z = cumulative_trapezoid(np.sin(th), sf, initial=0.0)
    idx = slice(None, None, fine)
    s = sf[idx]
    kappa = 1 + 2 * a * np.cos(2 * s)
    x, z = x[idx], z[idx]
    x[-1], z[-1] = x[0], z[0]
    return PlanarCurve(scale * s, cx + scale * x, cz + scale * z, th[idx], kappa / scale)


def const_graph(value=1.0, x1=1.0, n=101):
    x = np.linspace(0.0, x1, n)
    return GraphCurve(x, np.full(n, value), np.zeros(n))


def test_elastic_energy_examples():
    assert elastic_energy(segment(), Power(2, 0, 3)).total == pytest.approx(6.0, abs=1e-12)
    assert elastic_energy(ccw_circle(), Power(2, 0, 0)).total == pytest.approx(2 * np.pi, abs=1e-10)
    a = 1.3
    cat = catenary_by_arclength(-np.sinh(a), np.sinh(a), 1e-3)
    assert elastic_energy(cat, Power(0.5, 0, 0)).total == pytest.approx(2 * a, abs=1e-9)


def test_elastic_energy_variants():
    c = ccw_circle()
    assert elastic_energy(c, Exp(0.5)).total == pytest.approx(2 * np.pi * np.exp(0.5), rel=1e-12)
    e = elastic_energy(c, Log(0.0, 2.0))
    assert e.breakdown["bending"] == pytest.approx(0.0, abs=1e-12)
    assert e.breakdown["length"] == pytest.approx(4 * np.pi)
    with pytest.raises(DomainViolation):
        elastic_energy(segment(), Power(0.5, 0.1))


def test_willmore_energy_examples():
    c = ccw_circle()
    n1 = cylinder_willmore_energy(c, WillmoreParams(1, 2, 0, 0.7))
    assert n1.total == elastic_energy(c, Power(2, 0, 0.7)).total
    v = cylinder_willmore_energy(c, WillmoreParams(2, 2, 0, 0))
    assert v.total == pytest.approx(np.pi / 2, abs=1e-10)
    assert v.meta["normalization"] == "per unit ruling measure"
    assert cylinder_willmore_energy(segment(), WillmoreParams(3, 1.5, 0, 0)).total == 0.0


def test_potential_energy_examples():
    assert graph_potential_energy(const_graph(), StationaryParams(2, 1, 0)).total == pytest.approx(2.0)
    assert graph_potential_energy(const_graph(), StationaryParams(4, 3, 1)).total == pytest.approx(3.0)
    x = np.linspace(0, 1, 101)
    e = graph_potential_energy(GraphCurve(x, x, np.ones_like(x)), StationaryParams(2, 1, 0))
    assert e.total == pytest.approx(np.sqrt(2) + 1 / 3, abs=1e-12)
    assert set(e.breakdown) == {"surface", "potential", "volume"}


def test_potential_energy_guards():
    with pytest.raises(MExcluded):
        graph_potential_energy(const_graph(), StationaryParams(1, -1, 0))
    with pytest.raises(HeightNonpositive):
        graph_potential_energy(const_graph(-1.0), StationaryParams(1, -2, 0))


def test_weighted_area_examples():
    assert weighted_area_energy(const_graph(), SingularParams(2, 0)).total == pytest.approx(1.0)
    assert weighted_area_energy(const_graph(), SingularParams(1, 3)).total == pytest.approx(2.5)
    g = graph_from_function(np.cosh, np.sinh, -1.0, 1.0, 1e-3)
    assert weighted_area_energy(g, SingularParams(1, 0)).total == pytest.approx(1 + np.sinh(2) / 2, abs=1e-9)


def test_weighted_area_guards():
    with pytest.raises(HeightNonpositive):
        weighted_area_energy(const_graph(0.0), SingularParams(1, 0))
    with pytest.raises(DivergentVolume):
        weighted_area_energy(const_graph(), SingularParams(-1, 1))
    with pytest.raises(DivergentVolume):
        weighted_area_energy(const_graph(), SingularParams(-2, 0.5))
    # the area term alone stays finite
    assert weighted_area_energy(const_graph(2.0), SingularParams(-1, 0)).total == pytest.approx(0.5)


def test_simpson_sixteen_fold():
    exact = 1 + np.sinh(2) / 2
    errs = [abs(weighted_area_energy(graph_from_function(np.cosh, np.sinh, -1, 1, h), SingularParams(1, 0)).total
                - exact) for h in (0.1, 0.05)]
    assert errs[0] / errs[1] == pytest.approx(16.0, abs=2.0)


@settings(max_examples=40)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_breakdown_sums_to_total(eta, m, lam):
    if m in (0.0, -1.0) or eta == 0.0:
        return
    g = graph_from_function(lambda x: 1.5 + np.sin(x), np.cos, 0.0, 2.0, 0.01)
    e = graph_potential_energy(g, StationaryParams(eta, m, lam))
    assert e.total == sum(e.breakdown.values())
    assert EnergyValue.from_terms(a=1.0, b=2.5).as_dict()["total"] == 3.5


def test_flux_identity_circles():
    c = clockwise_circle(0.0, 2.0, 1.0)
    for m, target in ((1, np.pi), (2, 4 * np.pi)):
        lhs, rhs, gap = closed_flux_identity(c, 1.0, m)
        assert lhs == pytest.approx(target, abs=1e-9)
        assert rhs == pytest.approx(target, abs=1e-9)
        assert gap <= 1e-9


def test_flux_identity_orientation_free():
    ccw = closed_flux_identity(ccw_circle(), 1.0, 1.0)
    assert ccw.lhs == pytest.approx(-np.pi, abs=1e-9)
    assert ccw.gap <= 1e-9


def test_open_arc_rejected():
    with pytest.raises(RequiresClosed):
        closed_flux_identity(segment(), 1.0, 1.0)
    with pytest.raises(RequiresClosed):
        tangential_closure_check(catenary_by_arclength(0, 1, 0.01))


def test_tangential_closure():
    a, b = tangential_closure_check(clockwise_circle(0.0, 2.0, 1.0))
    assert abs(a) <= 1e-12 and abs(b) <= 1e-12
    a, b = tangential_closure_check(wobbly_loop())
    assert abs(a) <= 1e-9 and abs(b) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 0.4), st.floats(0.5, 2.0), st.floats(-2, 2), st.floats(4.0, 8.0),
       st.sampled_from([1.0, 2.0, 3.0, 0.5, -1.5]), st.floats(0.5, 2.0))
def test_flux_identity_on_smooth_loops(a, scale, cx, cz, m, eta):
    curve = wobbly_loop(a, scale, cx, cz, n=2048, fine=16)
    lhs, rhs, gap = closed_flux_identity(curve, eta, m)
    assert gap <= 1e-8 * max(1.0, abs(lhs))
    if m in (1.0, 3.0):
        # z**(m-1) >= 0 inside, so the flux is nonzero and stationary loops are impossible
        assert abs(rhs) > 0.1
