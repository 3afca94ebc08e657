"""Jacobi operator of stationary generating curves and the second variation.

On a generating curve the Jacobi operator is ``L[u] = u'' + q u`` with
``q = kappa**2 - m eta z**(m-1) nu`` and ``' = d/ds``.  Everything lives on
a uniform arc-length grid with Dirichlet data at both ends.  Only
ruling-independent variations are represented; for separable variations the
ruling factor adds a nonnegative Dirichlet term, so the sign of the
generating-curve form decides stability for that class.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .curve import GraphCurve, ensure_uniform
from .energies import graph_potential_energy
from .errors import (
    BoundaryMismatch,
    GridTooCoarse,
    HeightNonpositive,
    HypothesisViolated,
    NonZeroBoundary,
    ParameterError,
    StationarityWarning,
)
from .numerics import d1_uniform, grid_step, simpson_uniform
from .residuals import graph_el_residual, stationary_el_residual

STATIONARY_TOL = 1e-6
MIN_INTERIOR = 10
REDUCTION_NOTE = "generating-curve operator; ruling-separable variations, Dirichlet ends"


@dataclass(frozen=True, eq=False)
class JacobiDiscretization:
    s: np.ndarray
    h: float
    q: np.ndarray
    nu: np.ndarray
    theta: np.ndarray
    z: np.ndarray
    kappa: np.ndarray
    params: object
    dirichlet: bool = True

    @property
    def n_interior(self):
        return self.s.size - 2


@dataclass(frozen=True)
class StabilityReport:
    lambda_min: float
    identity_residual: float
    form_gap: float
    meta: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "lambda_min": self.lambda_min,
            "identity_residual": self.identity_residual,
            "form_gap": self.form_gap,
            "meta": dict(self.meta),
        }


def _needs_positive(m):
    return m - 1 < 0 or not float(m - 1).is_integer()


def jacobi_potential(curve, st, h=None):
    """Discretize ``q`` on a uniform arc-length grid.

    Graphs are converted to arc length first; non-uniform curves are resampled.
    A curve that is not stationary to ``STATIONARY_TOL`` only triggers a warning.
    """
    eta = st.require_eta()
    planar = curve.to_planar() if isinstance(curve, GraphCurve) else curve
    cu = ensure_uniform(planar, h)
    if _needs_positive(st.m) and np.any(cu.z <= 0):
        raise HeightNonpositive("z**(m-1) needs z > 0")
    res = stationary_el_residual(cu, st).linf
    if res > STATIONARY_TOL:
        warnings.warn(f"curve is not stationary (residual {res:.2e})", StationarityWarning, stacklevel=2)
    nu = cu.nu_vert
    q = cu.kappa**2 - st.m * eta * cu.z ** (st.m - 1.0) * nu
    return JacobiDiscretization(
        s=np.asarray(cu.s), h=grid_step(cu.s), q=q, nu=nu, theta=np.asarray(cu.theta),
        z=np.asarray(cu.z), kappa=np.asarray(cu.kappa), params=st,
    )


def apply_jacobi(jd, u):
    """``L[u]`` at interior nodes (fourth-order Laplacian); boundary entries are zero."""
    u = np.asarray(u, dtype=float)
    out = kernels.laplacian_dirichlet(u, jd.h) + jd.q * u
    out[0] = out[-1] = 0.0
    return out


def jacobi_identity_check(curve, st, h=None):
    """L-infinity of ``L[nu] + m eta z**(m-1)`` over interior nodes."""
    jd = curve if isinstance(curve, JacobiDiscretization) else jacobi_potential(curve, st, h)
    st = jd.params
    res = apply_jacobi(jd, jd.nu) + st.m * st.eta * jd.z ** (st.m - 1.0)
    return float(np.max(np.abs(res[1:-1])))


def _check_boundary(u):
    u = np.asarray(u, dtype=float)
    scale = max(1.0, float(np.max(np.abs(u))))
    if abs(u[0]) > 1e-12 * scale or abs(u[-1]) > 1e-12 * scale:
        raise NonZeroBoundary("test function must vanish at both ends")
    return u


def second_variation(jd, u, du=None):
    """``int (u'**2 - q u**2) ds``; ``u'`` by fourth-order differences unless given."""
    u = _check_boundary(u)
    du = d1_uniform(u, jd.h) if du is None else np.asarray(du, dtype=float)
    return float(simpson_uniform(du**2 - jd.q * u**2, jd.h))


def second_variation_direct(jd, u):
    """``-int u L[u] ds`` with the finite-difference Laplacian."""
    u = _check_boundary(u)
    return float(-simpson_uniform(u * apply_jacobi(jd, u), jd.h))


def second_variation_substituted(jd, w, dw=None):
    """Form for ``u = w nu``: ``int (m eta nu z**(m-1) w**2 + nu**2 w'**2) ds``.

    Returns ``(value, gap)`` where ``gap`` is the relative difference to
    ``second_variation(jd, w * nu)``.
    """
    w = _check_boundary(w)
    st = jd.params
    exact = dw
    dw = d1_uniform(w, jd.h) if dw is None else np.asarray(dw, dtype=float)
    value = float(simpson_uniform(
        st.m * st.eta * jd.nu * jd.z ** (st.m - 1.0) * w**2 + jd.nu**2 * dw**2, jd.h))
    u = w * jd.nu
    du = None if exact is None else dw * jd.nu - w * jd.kappa * np.sin(jd.theta)
    direct = second_variation(jd, u, du)
    scale = max(abs(value), abs(direct))
    gap = 0.0 if scale == 0.0 else abs(value - direct) / scale
    return value, gap


def tridiagonal(jd):
    """Second-order Dirichlet discretization of ``-d2/ds2 - q`` on the interior nodes."""
    inv = 1.0 / (jd.h * jd.h)
    diag = 2.0 * inv - jd.q[1:-1]
    off = np.full(diag.size - 1, -inv)
    return diag, off


def min_eigenvalue(jd, tol=1e-14):
    """Smallest Dirichlet eigenvalue of ``-L`` by Sturm-sequence bisection."""
    if jd.n_interior < MIN_INTERIOR:
        raise GridTooCoarse(f"need at least {MIN_INTERIOR} interior nodes, got {jd.n_interior}")
    diag, off = tridiagonal(jd)
    radius = np.zeros_like(diag)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo = float(np.min(diag - radius))
    hi = float(np.max(diag + radius))
    return float(kernels.bisect_lowest(diag, off, lo, hi, tol, 400))


def dirichlet_modes(s, coeffs):
    """``sum c_k sin(k pi t) / k`` on ``[s0, s1]`` and its exact derivative."""
    s = np.asarray(s, dtype=float)
    L = s[-1] - s[0]
    t = (s - s[0]) / L
    u = np.zeros_like(s)
    du = np.zeros_like(s)
    for k, c in enumerate(coeffs, start=1):
        u += c * np.sin(k * np.pi * t) / k
        du += c * np.pi / L * np.cos(k * np.pi * t)
    u[0] = u[-1] = 0.0
    return u, du


def random_test_functions(s, rng, count, modes=6):
    """``count`` random boundary-zero smooth functions with their derivatives."""
    return [dirichlet_modes(s, rng.uniforms(modes, -1.0, 1.0)) for _ in range(count)]


def stability_report(curve, st, rng, n_tests=20, h=None):
    jd = jacobi_potential(curve, st, h)
    gap = 0.0
    for w, dw in random_test_functions(jd.s, rng, n_tests):
        gap = max(gap, second_variation_substituted(jd, w, dw)[1])
    return StabilityReport(
        lambda_min=min_eigenvalue(jd),
        identity_residual=jacobi_identity_check(jd, st),
        form_gap=gap,
        meta={"reduction": REDUCTION_NOTE, "h": jd.h, "n_interior": jd.n_interior, "n_tests": n_tests},
    )


# ----------------------------------------------------------------------------
# Minimizer comparison
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class MinimizerComparison:
    E_f: float
    E_g: float
    calib_lhs: float
    ok: bool
    hypotheses_hold: bool = True

    def as_dict(self):
        return {"E_f": self.E_f, "E_g": self.E_g, "calib_lhs": self.calib_lhs,
                "ok": self.ok, "hypotheses_hold": self.hypotheses_hold}


def calibration_lhs(f, g, st):
    """``-eta int [(g**(m+1) - f**(m+1))/(m+1) - f**m (g - f)] dx``; nonpositive for convex potentials."""
    m1 = st.m + 1.0
    integrand = (g.f**m1 - f.f**m1) / m1 - f.f**st.m * (g.f - f.f)
    return float(-st.require_eta() * simpson_uniform(integrand, f.h))


def minimizer_compare(f, st, g):
    """Energy of the stationary graph ``f`` against a competitor ``g`` with the same boundary values."""
    if f.x.size != g.x.size or not np.allclose(f.x, g.x, rtol=0.0, atol=1e-12):
        raise ParameterError("competitor must share the grid of the stationary graph")
    scale = max(1.0, float(np.max(np.abs(f.f))))
    if abs(f.f[0] - g.f[0]) > 1e-12 * scale or abs(f.f[-1] - g.f[-1]) > 1e-12 * scale:
        raise BoundaryMismatch("competitor boundary values differ from the stationary graph")
    res = graph_el_residual(f, st).linf
    if res > STATIONARY_TOL:
        warnings.warn(f"graph is not stationary (residual {res:.2e})", StationarityWarning, stacklevel=2)
    holds = st.m > 0 and bool(np.all(st.require_eta() * f.nu_vert > 0))
    if not holds:
        warnings.warn("minimizer hypotheses (m > 0, eta nu > 0) fail", HypothesisViolated, stacklevel=2)
    E_f = graph_potential_energy(f, st).total
    E_g = graph_potential_energy(g, st).total
    lhs = calibration_lhs(f, g, st)
    ok = E_f <= E_g + 1e-12 and lhs >= E_f - E_g - 1e-10 and lhs <= 1e-12
    return MinimizerComparison(E_f, E_g, lhs, bool(ok), holds)
