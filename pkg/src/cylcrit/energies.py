"""Quadrature of the curve and graph functionals, and closed-curve flux identities.

All integrals are composite Simpson on uniform grids; non-uniform curves are
resampled first.  Cylinder energies are reported per unit ruling measure.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .curve import ensure_uniform
from .errors import DivergentVolume, DomainViolation, HeightNonpositive, MExcluded, RequiresClosed
from .families import Exp, Log, Power, as_kind, willmore_to_elastic
from .numerics import grid_step, simpson_uniform

CLOSED_TOL = 1e-8


@dataclass(frozen=True)
class EnergyValue:
    total: float
    breakdown: dict
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_terms(cls, meta=None, **terms):
        terms = {k: float(v) for k, v in terms.items()}
        total = 0.0
        for v in terms.values():
            total += v
        return cls(total=total, breakdown=terms, meta=dict(meta or {}))

    def as_dict(self):
        return {"total": self.total, "breakdown": dict(self.breakdown), "meta": dict(self.meta)}


def _integrate(curve, values):
    return simpson_uniform(values, grid_step(curve.s))


def _power_base(kind, kappa):
    # The density (kappa - mu)**p is finite at kappa = mu for p > 0, so the
    # energy admits that point even though the Euler-Lagrange terms do not.
    t = np.asarray(kappa, dtype=float) - kind.mu
    if kind.p > 0 and not float(kind.p).is_integer():
        if np.any(t < 0):
            raise DomainViolation("non-integer power needs kappa >= mu")
        return t
    return kind.check_domain(kappa)


def elastic_energy(curve, kind, h=None):
    """``int P(kappa) ds`` split into its curvature part and the length-multiplier part."""
    kind = as_kind(kind)
    cu = ensure_uniform(curve, h)
    length = _integrate(cu, np.ones(cu.size))
    if isinstance(kind, Power):
        t = _power_base(kind, cu.kappa)
        return EnergyValue.from_terms(bending=_integrate(cu, t**kind.p), length=kind.sigma * length)
    if isinstance(kind, Exp):
        return EnergyValue.from_terms(bending=_integrate(cu, np.exp(kind.mu * cu.kappa)))
    if isinstance(kind, Log):
        t = kind.check_domain(cu.kappa)
        return EnergyValue.from_terms(bending=_integrate(cu, np.log(t)), length=kind.sigma * length)
    raise TypeError(kind)


def cylinder_willmore_energy(curve, wp, h=None):
    """Willmore-type energy of the cylinder over ``curve``, per unit ruling measure.

    Equals ``n**-p`` times the curve energy with length multiplier ``n**p varsigma``.
    """
    base = elastic_energy(curve, willmore_to_elastic(wp).kind, h)
    scale = float(wp.n) ** (-wp.p)
    meta = {"normalization": "per unit ruling measure", "n": int(wp.n)}
    return EnergyValue.from_terms(meta=meta, **{k: scale * v for k, v in base.breakdown.items()})


def _needs_positive(m):
    return m < 0 or not float(m).is_integer()


def graph_potential_energy(g, st):
    """Area plus vertical potential plus volume term for a graph, fibre-integrated in z."""
    if st.m == -1:
        raise MExcluded("the fibre integral of z**-1 is a logarithm; m = -1 excluded")
    if _needs_positive(st.m) and np.any(g.f <= 0):
        raise HeightNonpositive("this exponent needs f > 0")
    eta = st.require_eta()
    h = g.h
    m1 = st.m + 1.0
    return EnergyValue.from_terms(
        surface=simpson_uniform(np.sqrt(1.0 + g.fp**2), h),
        potential=eta * simpson_uniform(g.f**m1 / m1, h),
        volume=st.lam * simpson_uniform(g.f, h),
    )


def weighted_area_energy(g, sp):
    """Height-weighted area plus weighted volume for a graph."""
    if np.any(g.f <= 0):
        raise HeightNonpositive("weighted area needs f > 0")
    h = g.h
    area = simpson_uniform(g.f**sp.alpha * np.sqrt(1.0 + g.fp**2), h)
    if sp.varpi == 0:
        volume = 0.0
    elif sp.alpha <= -1:
        raise DivergentVolume("the weighted volume diverges at z = 0 for alpha <= -1")
    else:
        a1 = sp.alpha + 1.0
        volume = sp.varpi * simpson_uniform(g.f**a1 / a1, h)
    return EnergyValue.from_terms(weighted_area=area, weighted_volume=volume)


# ----------------------------------------------------------------------------
# Closed curves
# ----------------------------------------------------------------------------


class FluxIdentity(NamedTuple):
    lhs: float
    rhs: float
    gap: float


def require_closed(curve, tol=CLOSED_TOL):
    dx = abs(curve.x[-1] - curve.x[0])
    dz = abs(curve.z[-1] - curve.z[0])
    dth = curve.theta[-1] - curve.theta[0]
    dth = abs((dth + np.pi) % (2.0 * np.pi) - np.pi)
    if max(dx, dz, dth) > tol:
        raise RequiresClosed(f"curve endpoints differ by {max(dx, dz, dth):.3e}")


def closed_flux_identity(curve, eta, m, h=None):
    """Flux of ``eta z**m e_z`` through a closed curve against its enclosed-area integral.

    ``lhs`` is ``int eta z**m nu ds`` with the curve's own normal.  ``rhs`` is
    ``m eta`` times the area integral of ``z**(m-1)``, computed by Green's
    theorem as ``-int m eta x z**(m-1) z' ds`` (this carries the orientation
    sign, so ``lhs == rhs`` for either traversal direction).
    """
    require_closed(curve)
    if (m - 1 < 0 or not float(m).is_integer()) and np.any(curve.z <= 0):
        raise HeightNonpositive("this exponent needs z > 0")
    cu = ensure_uniform(curve, h)
    z, th = cu.z, cu.theta
    lhs = _integrate(cu, eta * z**m * np.cos(th))
    rhs = -_integrate(cu, m * eta * cu.x * z ** (m - 1.0) * np.sin(th))
    return FluxIdentity(float(lhs), float(rhs), float(abs(lhs - rhs)))


def tangential_closure_check(curve, h=None):
    """``(int nu ds, int kappa nu ds)`` over a closed curve; both vanish exactly."""
    require_closed(curve)
    cu = ensure_uniform(curve, h)
    nu = np.cos(cu.theta)
    return float(_integrate(cu, nu)), float(_integrate(cu, cu.kappa * nu))
