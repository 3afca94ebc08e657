import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from cylcrit.errors import AlphaExcluded, DomainViolation, ExpRequiresNonzeroVarpi, ParameterError, ParamsExcluded
from cylcrit.families import (
    ElasticParams,
    Exp,
    Log,
    Power,
    SingularParams,
    StationaryParams,
    WillmoreParams,
    elastic_to_singular,
    lagrangian_eval,
    lagrangian_ode_residual,
    params_from_record,
    params_to_record,
    singular_to_elastic,
    singular_to_stationary,
    stationary_to_elastic,
    willmore_to_elastic,
)

QUARTER = [k / 4 for k in range(-12, 13) if k not in (0, -4)]


def test_willmore_to_elastic():
    assert willmore_to_elastic(WillmoreParams(2, 2, 0, 1)) == ElasticParams(2, 0, 4)
    assert willmore_to_elastic(WillmoreParams(5, 1.5, 0, 0)).sigma == 0
    assert willmore_to_elastic(WillmoreParams(1, 3, 0.2, 0.7)) == ElasticParams(3, 0.2, 0.7)
    with pytest.raises(ParameterError):
        WillmoreParams(0, 2)


def test_singular_to_elastic_examples():
    assert singular_to_elastic(SingularParams(1, 0)) == ElasticParams(0.5, 0, 0)
    e = singular_to_elastic(SingularParams(0.5, 0))
    assert e.p == pytest.approx(1 / 3) and e.mu == 0 and e.sigma == 0
    assert singular_to_elastic(SingularParams(-1, 2)) == Exp(0.5)
    with pytest.raises(ExpRequiresNonzeroVarpi):
        singular_to_elastic(SingularParams(-1, 0))


def test_excluded_parameters():
    with pytest.raises(ParamsExcluded):
        SingularParams(0, 1)
    with pytest.raises(ParamsExcluded):
        StationaryParams(0.0, 1)
    with pytest.raises(ParamsExcluded):
        StationaryParams(1.0, 0)
    with pytest.raises(ParameterError):
        StationaryParams(None, 1).require_eta()


def test_stationary_to_elastic_examples():
    assert stationary_to_elastic(StationaryParams(1, 1, 0.3), 0) == ElasticParams(2, 0.3, 0)
    assert stationary_to_elastic(StationaryParams(1, -1, 0), 1) == Log(0, 1)
    assert stationary_to_elastic(StationaryParams(1, -2, 0), 0) == ElasticParams(0.5, 0, 0)


def test_singular_to_stationary_examples():
    assert singular_to_stationary(SingularParams(1, 0)) == StationaryParams(None, -2, 0)
    assert singular_to_stationary(SingularParams(0.5, 0)) == StationaryParams(None, -1.5, 0)
    with pytest.raises(AlphaExcluded):
        singular_to_stationary(SingularParams(-1, 1))


@given(st.sampled_from(QUARTER), st.floats(-5, 5))
def test_singular_elastic_round_trip(alpha, varpi):
    back = elastic_to_singular(singular_to_elastic(SingularParams(alpha, varpi)))
    assert back.alpha == pytest.approx(alpha, abs=1e-14)
    assert back.varpi == pytest.approx(varpi, abs=1e-14)


@given(st.sampled_from(QUARTER), st.floats(-5, 5))
def test_map_composition(alpha, varpi):
    sp = SingularParams(alpha, varpi)
    assert stationary_to_elastic(singular_to_stationary(sp), 0.0) == singular_to_elastic(sp)


def test_elastic_to_singular_guards():
    with pytest.raises(ParameterError):
        elastic_to_singular(ElasticParams(0.5, 0, 1))
    with pytest.raises(ParameterError):
        elastic_to_singular(ElasticParams(1, 0, 0))


def test_lagrangian_examples():
    assert lagrangian_eval(Power(2, 0, 0), 3.0) == (9.0, 6.0, 2.0)
    assert lagrangian_eval(Exp(1.0), 0.0) == (1.0, 1.0, 1.0)
    assert lagrangian_eval(Log(0, 0), 1.0) == (0.0, 1.0, -1.0)


def test_lagrangian_domains():
    with pytest.raises(DomainViolation):
        lagrangian_eval(Power(0.5, 1.0), 0.5)
    with pytest.raises(DomainViolation):
        lagrangian_eval(Log(0.2), 0.2)
    with pytest.raises(DomainViolation):
        lagrangian_eval(Power(-1, 0.0), 0.0)
    # integer powers are admitted on both sides of mu
    assert lagrangian_eval(Power(3, 1.0), -1.0)[0] == -8.0


def _kinds():
    power = st.builds(Power, st.sampled_from([-1.5, -1, 0.5, 1.5, 2, 3, 1 / 3]),
                      st.floats(-1, 1), st.floats(-1, 1))
    exp = st.builds(Exp, st.floats(-2, 2).filter(lambda v: abs(v) > 0.1))
    log = st.builds(Log, st.floats(-1, 1), st.floats(-1, 1))
    return st.one_of(power, exp, log)


@settings(max_examples=100)
@given(_kinds(), st.floats(0.2, 3.0))
def test_lagrangian_derivatives_match_differences(kind, offset):
    shift = kind.lam if isinstance(kind, Log) else getattr(kind, "mu", 0.0)
    kappa = (shift if not isinstance(kind, Exp) else 0.0) + offset
    d = 1e-5
    P, Pd, Pdd = lagrangian_eval(kind, kappa)
    Pp, Pdp, _ = lagrangian_eval(kind, kappa + d)
    Pm, Pdm, _ = lagrangian_eval(kind, kappa - d)
    assert (Pp - Pm) / (2 * d) == pytest.approx(Pd, rel=1e-7, abs=1e-7)
    assert (Pdp - Pdm) / (2 * d) == pytest.approx(Pdd, rel=1e-7, abs=1e-7)


def test_lagrangian_ode_examples():
    sp = SingularParams(1, 0)
    kind = singular_to_elastic(sp)
    for k in (0.5, 1.0, 2.0):
        assert abs(lagrangian_ode_residual(sp, kind, k)) <= 1e-12
    assert lagrangian_ode_residual(sp, Power(2, 0, 0), 1.0) == pytest.approx(3.0)
    for k in np.linspace(-3, 3, 13):
        assert abs(lagrangian_ode_residual(SingularParams(-1, 1), Exp(1.0), k)) <= 1e-12


@settings(max_examples=100)
@given(st.sampled_from(QUARTER + [-1.0]), st.floats(0.25, 2.0), st.booleans(), st.floats(0.05, 3.0))
def test_lagrangian_ode_vanishes_on_mapped_lagrangian(alpha, varpi, neg, offset):
    sp = SingularParams(alpha, -varpi if neg else varpi)
    kind = singular_to_elastic(sp)
    kappa = offset if isinstance(kind, Exp) else kind.kind.mu + offset
    P, _, _ = lagrangian_eval(kind, kappa)
    assume(abs(P) < 1e6)
    assert abs(lagrangian_ode_residual(sp, kind, kappa)) <= 1e-12 * max(1.0, abs(P))


@pytest.mark.parametrize("obj", [
    ElasticParams(0.5, 0.1, 2.0), WillmoreParams(3, 2.0, 0.5, 1.0), SingularParams(1.5, -0.5),
    StationaryParams(1.0, -2.0, 0.3), StationaryParams(None, 1.0, 0.0),
    Power(2.0, 0.3, 1.0), Exp(0.5), Log(0.1, -1.0),
])
def test_record_round_trip(obj):
    assert params_from_record(params_to_record(obj)) == obj


def test_record_tags():
    assert params_to_record(SingularParams(1.0, 0.0)) == {"family": "singular", "alpha": 1.0, "varpi": 0.0}
    with pytest.raises(ParameterError):
        params_from_record({"alpha": 1.0})
    with pytest.raises(ParameterError):
        params_from_record({"kind": "cubic"})
    assert math.isclose(params_from_record({"family": "stationary", "eta": 1, "m": 2, "lam": 0.5}).lam, 0.5)
