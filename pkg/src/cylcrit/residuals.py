"""Pointwise Euler-Lagrange residuals and closed-form fits of the free constants.

The second-order families are checked algebraically from the sampled
``(z, theta, kappa)``.  The curvature (fourth-order) equation is checked in
the general form ``(dP/dkappa)'' + kappa**2 dP/dkappa - kappa P`` with a
three-point second difference on a uniform arc-length grid; two samples at
each end are left out of the norms.
"""

from dataclasses import dataclass, field

import numpy as np

from .curve import GraphCurve, ensure_uniform
from .errors import DegenerateFit, HeightNonpositive
from .families import Log, Power, as_kind, lagrangian_eval, willmore_to_elastic
from .numerics import d1_uniform, d2_central, grid_step

EDGE = 2


@dataclass(frozen=True, eq=False)
class ResidualReport:
    s: np.ndarray
    values: np.ndarray
    linf: float
    l2: float
    n_interior: int
    fitted: dict = field(default_factory=dict)

    @classmethod
    def from_values(cls, s, values, **fitted):
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return cls(np.asarray(s, float), values, 0.0, 0.0, 0, dict(fitted))
        return cls(
            s=np.asarray(s, dtype=float),
            values=values,
            linf=float(np.max(np.abs(values))),
            l2=float(np.sqrt(np.mean(values**2))),
            n_interior=int(values.size),
            fitted=dict(fitted),
        )

    def as_dict(self, include_values=True):
        out = {"linf": self.linf, "l2": self.l2, "n_interior": self.n_interior}
        out.update(self.fitted)
        if include_values:
            out["s"] = self.s.tolist()
            out["residual"] = self.values.tolist()
        return out


def _needs_positive(m):
    return m < 0 or not float(m).is_integer()


def _heights(curve):
    if isinstance(curve, GraphCurve):
        return curve.x, curve.f, curve.nu_vert, curve.curvature()
    return curve.s, curve.z, curve.nu_vert, curve.kappa


def singular_el_residual(curve, sp):
    """``kappa - alpha nu/z - varpi`` at every sample."""
    s, z, nu, kappa = _heights(curve)
    if np.any(z <= 0):
        raise HeightNonpositive("weighted-area residual needs z > 0")
    return ResidualReport.from_values(s, kappa - sp.alpha * nu / z - sp.varpi)


def stationary_el_residual(curve, st):
    """``kappa - eta z**m - lambda`` at every sample."""
    s, z, _, kappa = _heights(curve)
    if _needs_positive(st.m) and np.any(z <= 0):
        raise HeightNonpositive("this exponent needs z > 0")
    return ResidualReport.from_values(s, kappa - st.require_eta() * z**st.m - st.lam)


def graph_el_residual(g, st):
    """Stationary residual of a graph with curvature from fourth-order differences of ``f'``."""
    if _needs_positive(st.m) and np.any(g.f <= 0):
        raise HeightNonpositive("this exponent needs f > 0")
    fpp = d1_uniform(g.fp, g.h)
    kappa = fpp / (1.0 + g.fp**2) ** 1.5
    inner = slice(EDGE, g.x.size - EDGE)
    res = kappa - st.require_eta() * g.f**st.m - st.lam
    return ResidualReport.from_values(g.x[inner], res[inner])


def _elastic_terms(curve, kind, h):
    """Uniform curve, the sigma-free residual, and kappa, restricted to interior samples."""
    kind = as_kind(kind)
    cu = ensure_uniform(curve, h)
    step = grid_step(cu.s)
    kappa = cu.kappa
    P, Pd, _ = lagrangian_eval(kind, kappa)
    res = d2_central(Pd, step) + kappa**2 * Pd - kappa * P
    inner = slice(EDGE, cu.size - EDGE)
    return cu.s[inner], res[inner], kappa[inner]


def elastic_el_residual(curve, kind, h=None):
    """Residual of the curvature Euler-Lagrange equation for the Lagrangian ``kind``."""
    s, res, _ = _elastic_terms(curve, kind, h)
    return ResidualReport.from_values(s, res)


def willmore_cyl_residual(curve, wp, h=None):
    return elastic_el_residual(curve, willmore_to_elastic(wp), h)


def _fit_sigma(curve, kind, h):
    base_kind = kind.with_sigma(0.0)
    s, base, kappa = _elastic_terms(curve, base_kind, h)
    k2 = float(np.sum(kappa**2))
    if k2 < 1e-12:
        raise DegenerateFit("curvature vanishes; sigma is not identifiable")
    sigma_hat = float(np.sum(base * kappa) / k2)
    return sigma_hat, ResidualReport.from_values(s, base - sigma_hat * kappa, sigma=sigma_hat)


def fit_sigma(curve, p, mu, h=None):
    """Least-squares length multiplier for ``P = (kappa - mu)**p + sigma``.

    The residual is affine in sigma with slope ``-kappa``, so the fit is closed form.
    """
    return _fit_sigma(curve, Power(float(p), float(mu), 0.0), h)


def fit_sigma_log(curve, lam, h=None):
    """Same fit for the logarithmic Lagrangian ``log(kappa - lambda) + sigma``."""
    return _fit_sigma(curve, Log(float(lam), 0.0), h)


def sigma_estimates(curve, kind, h=None, kappa_floor=1e-8):
    """Pointwise ``base / kappa``; constant along a generalized elastic curve."""
    _, base, kappa = _elastic_terms(curve, as_kind(kind).with_sigma(0.0), h)
    keep = np.abs(kappa) > kappa_floor
    return base[keep] / kappa[keep]


def fit_eta(curve, m, lam):
    """Least squares of ``kappa - lambda`` against ``z**m``."""
    s, z, _, kappa = _heights(curve)
    if _needs_positive(m) and np.any(z <= 0):
        raise HeightNonpositive("this exponent needs z > 0")
    if np.ptp(z) <= 1e-12 * max(1.0, float(np.max(np.abs(z)))):
        raise DegenerateFit("height is constant; eta is not identifiable")
    zm = z**m
    denom = float(np.sum(zm * zm))
    if denom < 1e-300:
        raise DegenerateFit("z**m vanishes on the curve")
    eta_hat = float(np.sum((kappa - lam) * zm) / denom)
    return eta_hat, ResidualReport.from_values(s, kappa - eta_hat * zm - lam, eta=eta_hat)
