"""Generating-curve integrators and the stationary graph boundary value problem.

Curves are integrated in the tangent-angle form (``theta' = kappa``) so that
vertical tangents pass without trouble.  The default is classical fixed-step
RK4, which keeps fixtures bit-stable; ``mode="adaptive"`` switches to an
embedded 8(5,3) pair from SciPy with dense output sampled on the same grid.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import kernels
from .curve import GraphCurve, PlanarCurve, TOL_GEOM, validate_curve
from .errors import (
    DomainViolation,
    ExponentDegenerate,
    HeightVanished,
    MExcluded,
    ParameterError,
    ShootingDiverged,
    StepFailure,
)
from .families import ElasticParams, StationaryParams

Z_GUARD = 1e-8
SLOPE_CAP = 1e8
MAX_SHOOT_ITER = 200


@dataclass(frozen=True)
class InitialData:
    x0: float = 0.0
    z0: float = 1.0
    theta0: float = 0.0
    kappa0: Optional[float] = None
    kappa0p: float = 0.0


@dataclass(frozen=True)
class StepControl:
    mode: str = "fixed"
    h: float = 1e-3
    rtol: float = 1e-10
    atol: float = 1e-12

    def __post_init__(self):
        if self.mode not in ("fixed", "adaptive"):
            raise ParameterError(f"unknown step mode {self.mode!r}")
        if not self.h > 0:
            raise ParameterError("step h must be positive")

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class FirstIntegralReport:
    c_hat: float
    drift: float


def _grid(s_max, h):
    if not s_max > 0:
        raise ParameterError("s_max must be positive")
    nsteps = max(int(round(s_max / h)), 1)
    return nsteps, s_max / nsteps


def _raise_status(status, where):
    if status == kernels.HEIGHT:
        raise HeightVanished(f"height fell below {Z_GUARD:g} {where}")
    if status == kernels.DOMAIN:
        raise DomainViolation(f"curvature left the Lagrangian domain {where}")
    if status != kernels.OK:
        raise StepFailure(f"integration produced non-finite values {where}")


def _needs_positive_height(m):
    return m < 0 or not float(m).is_integer()


def _finish(s, cols, tol_geom, validate):
    x, z, th, kap = cols
    if validate:
        return validate_curve(s, x, z, th, kap, tol_geom=tol_geom)
    return PlanarCurve(s, x, z, th, kap)


def _adaptive(rhs, y0, nsteps, h, control, z_index=1, guard=True):
    s_eval = h * np.arange(nsteps + 1)
    events = None
    if guard:
        def hit_floor(_s, y):
            return y[z_index] - Z_GUARD
        hit_floor.terminal = True
        events = hit_floor
    sol = solve_ivp(rhs, (0.0, s_eval[-1]), y0, method="DOP853", t_eval=s_eval,
                    rtol=control.rtol, atol=control.atol, events=events)
    if sol.status == 1:
        raise HeightVanished(f"height fell below {Z_GUARD:g} at s={sol.t_events[0][0]:.6g}")
    if sol.status != 0:
        raise StepFailure(sol.message)
    return s_eval, sol.y


def solve_singular(sp, init=InitialData(), s_max=1.0, control=StepControl(), *,
                   tol_geom=TOL_GEOM, validate=True):
    """Generating curve of a weighted-area critical cylinder: ``kappa = alpha nu/z + varpi``."""
    if not init.z0 > 0:
        raise HeightVanished("singular family needs z0 > 0")
    nsteps, h = _grid(s_max, control.h)
    alpha, varpi = float(sp.alpha), float(sp.varpi)
    if control.mode == "fixed":
        out, count, status = kernels.rk4_singular(alpha, varpi, float(init.x0), float(init.z0),
                                                  float(init.theta0), h, nsteps, Z_GUARD)
        _raise_status(status, f"after {count} steps")
        s = h * np.arange(nsteps + 1)
        return _finish(s, out.T, tol_geom, validate)

    def rhs(_s, y):
        c = np.cos(y[2])
        return [c, np.sin(y[2]), alpha * c / y[1] + varpi]

    s, y = _adaptive(rhs, [init.x0, init.z0, init.theta0], nsteps, h, control)
    kap = alpha * np.cos(y[2]) / y[1] + varpi
    return _finish(s, (y[0], y[1], y[2], kap), tol_geom, validate)


def solve_stationary(st, init=InitialData(), s_max=1.0, control=StepControl(), *,
                     tol_geom=TOL_GEOM, validate=True):
    """Generating curve of a vertical-potential critical cylinder: ``kappa = eta z**m + lambda``."""
    eta = float(st.require_eta())
    m, lam = float(st.m), float(st.lam)
    positive = _needs_positive_height(m)
    if positive and not init.z0 > 0:
        raise HeightVanished("this exponent needs z0 > 0")
    nsteps, h = _grid(s_max, control.h)
    if control.mode == "fixed":
        out, count, status = kernels.rk4_stationary(eta, m, lam, float(init.x0), float(init.z0),
                                                    float(init.theta0), h, nsteps, Z_GUARD, positive)
        _raise_status(status, f"after {count} steps")
        s = h * np.arange(nsteps + 1)
        return _finish(s, out.T, tol_geom, validate)

    def rhs(_s, y):
        return [np.cos(y[2]), np.sin(y[2]), eta * y[1] ** m + lam]

    s, y = _adaptive(rhs, [init.x0, init.z0, init.theta0], nsteps, h, control, guard=positive)
    return _finish(s, (y[0], y[1], y[2], eta * y[1] ** m + lam), tol_geom, validate)


def elastic_initial_state(ep, kappa0, kappa0p):
    """``(v, v')`` at s = 0 for ``v = (kappa - mu)**(p - 1)``."""
    p = float(ep.p)
    t0 = kappa0 - ep.mu
    if p == 2.0:
        return t0, kappa0p
    if t0 <= 0:
        raise DomainViolation("need kappa0 > mu for this exponent")
    return t0 ** (p - 1.0), (p - 1.0) * t0 ** (p - 2.0) * kappa0p


def solve_elastic(ep, init, s_max=1.0, control=StepControl(), *, tol_geom=TOL_GEOM, validate=True):
    """Integrate the fourth-order Euler-Lagrange equation of ``int ((kappa-mu)**p + sigma) ds``."""
    p, mu, sigma = float(ep.p), float(ep.mu), float(ep.sigma)
    if p in (0.0, 1.0):
        raise ExponentDegenerate(f"p = {p:g} has no fourth-order Euler-Lagrange equation")
    if init.kappa0 is None:
        raise ParameterError("elastic solve needs kappa0 (and kappa0p)")
    v0, w0 = elastic_initial_state(ep, float(init.kappa0), float(init.kappa0p))
    nsteps, h = _grid(s_max, control.h)
    if control.mode == "fixed":
        out, count, status = kernels.rk4_elastic(p, mu, sigma, float(init.x0), float(init.z0),
                                                 float(init.theta0), v0, w0, h, nsteps)
        _raise_status(status, f"after {count} steps")
        s = h * np.arange(nsteps + 1)
        return _finish(s, out.T[:4], tol_geom, validate)

    def shift(v):
        if p == 2.0:
            return v
        if v <= 0:
            raise DomainViolation("v left the invertible branch")
        return v ** (1.0 / (p - 1.0))

    def rhs(_s, y):
        t = shift(y[3])
        kap = mu + t
        return [np.cos(y[2]), np.sin(y[2]), kap, y[4], (kap * (t**p + sigma) - p * kap * kap * y[3]) / p]

    s, y = _adaptive(rhs, [init.x0, init.z0, init.theta0, v0, w0], nsteps, h, control, guard=False)
    kap = mu + np.array([shift(v) for v in y[3]])
    return _finish(s, (y[0], y[1], y[2], kap), tol_geom, validate)


# ----------------------------------------------------------------------------
# Graph boundary value problem by shooting
# ----------------------------------------------------------------------------


class _Shooter:
    def __init__(self, st, x0, x1, f0, f1, h):
        self.eta = float(st.require_eta())
        self.m, self.lam = float(st.m), float(st.lam)
        self.x0, self.f0, self.f1 = float(x0), float(f0), float(f1)
        self.nsteps = max(int(round((x1 - x0) / h)), 2)
        self.h = (x1 - x0) / self.nsteps
        self.positive = _needs_positive_height(self.m)
        self.evaluations = 0

    def run(self, a):
        self.evaluations += 1
        return kernels.rk4_graph(self.eta, self.m, self.lam, self.x0, self.f0, float(a),
                                 self.h, self.nsteps, Z_GUARD, self.positive, SLOPE_CAP)

    def mismatch(self, a):
        out, count, status = self.run(a)
        if status == kernels.OK:
            return out[-1, 0] - self.f1, out[-1, 3]
        if status in (kernels.HEIGHT, kernels.BLOWUP_DOWN):
            return -np.inf, np.nan
        if status == kernels.BLOWUP_UP:
            return np.inf, np.nan
        if status == kernels.NONFINITE and count > 0:
            # overflow inside one step; the last finite slope tells the direction
            last = out[count - 1, 1]
            if last != 0:
                return np.copysign(np.inf, last), np.nan
        return np.nan, np.nan


def _bracket(shooter, center=0.0, step=0.25, max_abs=1e6):
    """Doubling search outward from ``center`` for a sign change of the mismatch."""
    F0, _ = shooter.mismatch(center)
    if F0 == 0:
        return center, F0, center, F0
    if np.isnan(F0):
        raise ShootingDiverged("shooting from the initial slope produced non-finite states")
    prev = {1: (center, F0), -1: (center, F0)}
    while step <= max_abs:
        for sign in (1, -1):
            a = center + sign * step
            F, _ = shooter.mismatch(a)
            if np.isnan(F):
                continue
            a_prev, F_prev = prev[sign]
            if np.sign(F) != np.sign(F_prev):
                lo, hi = sorted([(a_prev, F_prev), (a, F)])
                return lo[0], lo[1], hi[0], hi[1]
            prev[sign] = (a, F)
        step *= 2.0
    raise ShootingDiverged("no sign change of the boundary mismatch while bracketing the slope")


def solve_stationary_graph_bvp(st, interval, heights, *, h=1e-3, slope_guess=None,
                               tol=1e-12, max_iter=MAX_SHOOT_ITER):
    """Dirichlet problem ``f'' = (eta f**m + lambda)(1 + f'**2)**1.5`` by shooting on ``f'(x0)``.

    Bracketing by doubling outward from ``slope_guess`` (default: the chord
    slope), bisection until both ends integrate cleanly, then Newton steps
    using the slope sensitivity, safeguarded by the bracket.  The problem can
    have several solutions; the one reached is the first bracketed root
    around the guess, so pass ``slope_guess`` to select a branch.
    """
    x0, x1 = map(float, interval)
    f0, f1 = map(float, heights)
    if not x1 > x0:
        raise ParameterError("interval must satisfy x0 < x1")
    shooter = _Shooter(st, x0, x1, f0, f1, h)
    if shooter.positive and (f0 <= 0 or f1 <= 0):
        raise HeightVanished("boundary heights must be positive for this exponent")

    if slope_guess is None:
        slope_guess = (f1 - f0) / (x1 - x0)
    a_lo, F_lo, a_hi, F_hi = _bracket(shooter, float(slope_guess))
    a = 0.5 * (a_lo + a_hi)
    scale = max(1.0, abs(f1))
    for _ in range(max_iter):
        if shooter.evaluations > max_iter:
            break
        F, dF = shooter.mismatch(a)
        if np.isfinite(F) and abs(F) <= tol * scale:
            return _graph_from_run(shooter, a)
        if np.isnan(F):
            raise ShootingDiverged("shooting produced non-finite states")
        if np.sign(F) == np.sign(F_lo):
            a_lo, F_lo = a, F
        else:
            a_hi, F_hi = a, F
        candidate = a - F / dF if np.isfinite(F) and np.isfinite(dF) and dF != 0 else np.nan
        if np.isfinite(candidate) and min(a_lo, a_hi) < candidate < max(a_lo, a_hi):
            a = candidate
        else:
            a = 0.5 * (a_lo + a_hi)
        if abs(a_hi - a_lo) <= 1e-15 * max(1.0, abs(a)):
            break
    raise ShootingDiverged(f"boundary mismatch did not converge in {max_iter} iterations")


def _graph_from_run(shooter, a):
    out, _, _ = shooter.run(a)
    x = shooter.x0 + shooter.h * np.arange(shooter.nsteps + 1)
    return GraphCurve(x=x, f=out[:, 0], fp=out[:, 1], fpp=out[:, 2], arclength=out[:, 5])


# ----------------------------------------------------------------------------
# First integral
# ----------------------------------------------------------------------------


def first_integral_values(st, curve):
    """Pointwise ``-nu - eta z**(m+1)/(m+1) - lambda z``; constant along stationary curves."""
    if st.m == -1:
        raise MExcluded("the first integral needs m != -1")
    eta = st.require_eta()
    if isinstance(curve, GraphCurve):
        z, nu = curve.f, curve.nu_vert
    else:
        z, nu = curve.z, curve.nu_vert
    return -nu - eta * z ** (st.m + 1.0) / (st.m + 1.0) - st.lam * z


def first_integral_report(st, curve):
    q = first_integral_values(st, curve)
    c_hat = float(np.mean(q))
    return FirstIntegralReport(c_hat=c_hat, drift=float(np.max(np.abs(q - c_hat))))
