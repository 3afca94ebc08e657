"""Arc-length sampled planar curves, graphs, and the cylinder reduction.

Orientation is fixed: ``T = (cos theta, sin theta)`` and ``N`` is ``T`` rotated
by +pi/2, so the vertical normal component is ``nu_vert = cos theta``.
Curves with the opposite orientation must be re-oriented by the caller.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .errors import (
    CurvatureInconsistent,
    NonMonotonicArcLength,
    ParameterError,
    StepTooLarge,
    TangentInconsistent,
)
from .numerics import d1, d1_uniform, grid_step, is_uniform

TOL_GEOM = 1e-6
MIN_SAMPLES = 5


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PlanarCurve:
    s: np.ndarray
    x: np.ndarray
    z: np.ndarray
    theta: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        for name in ("s", "x", "z", "theta", "kappa"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def nu_vert(self):
        return np.cos(self.theta)

    @property
    def size(self):
        return self.s.size

    @property
    def length(self):
        return float(self.s[-1] - self.s[0])

    @property
    def is_uniform(self):
        return is_uniform(self.s)

    def as_array(self):
        """Columns ``s, x, z, theta, kappa`` as an ``(n, 5)`` array."""
        return np.column_stack([self.s, self.x, self.z, self.theta, self.kappa])


@dataclass(frozen=True, eq=False)
class CylinderView:
    n: int
    H: np.ndarray
    A2: np.ndarray
    nu_vert: np.ndarray


@dataclass(frozen=True, eq=False)
class GraphCurve:
    """Non-parametric curve ``z = f(x)`` on a uniform grid.

    ``fpp`` and ``arclength`` are optional; when absent they are reconstructed
    from ``fp`` by fourth-order differences and Hermite-corrected trapezoids.
    """

    x: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    fpp: Optional[np.ndarray] = None
    arclength: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        for name in ("x", "f", "fp", "fpp", "arclength"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, _frozen(val))
        n = self.x.size
        if n < 3:
            raise ParameterError("graph needs at least 3 grid points")
        if self.f.size != n or self.fp.size != n:
            raise ParameterError("f and fp must match the grid size")
        if np.any(np.diff(self.x) <= 0) or not is_uniform(self.x):
            raise ParameterError("graph grid must be uniform and increasing")

    @property
    def domain(self):
        return float(self.x[0]), float(self.x[-1])

    @property
    def h(self):
        return grid_step(self.x)

    @property
    def nu_vert(self):
        return 1.0 / np.sqrt(1.0 + self.fp**2)

    def second_derivative(self):
        if self.fpp is not None:
            return self.fpp
        return d1_uniform(self.fp, self.h)

    def curvature(self):
        return self.second_derivative() / (1.0 + self.fp**2) ** 1.5

    def arc_length(self):
        if self.arclength is not None:
            return self.arclength
        w = np.sqrt(1.0 + self.fp**2)
        dw = self.fp * self.second_derivative() / w
        h = self.h
        pieces = 0.5 * h * (w[:-1] + w[1:]) + h * h / 12.0 * (dw[:-1] - dw[1:])
        return np.concatenate([[0.0], np.cumsum(pieces)])

    def to_planar(self):
        """The same curve as an arc-length sampled ``PlanarCurve`` (non-uniform in s)."""
        return PlanarCurve(
            s=self.arc_length(),
            x=self.x,
            z=self.f,
            theta=np.arctan(self.fp),
            kappa=self.curvature(),
        )


def geometry_defects(curve):
    """Max tangent and curvature defects over interior samples."""
    th = np.unwrap(curve.theta)
    xp = d1(curve.x, curve.s)
    zp = d1(curve.z, curve.s)
    thp = d1(th, curve.s)
    inner = slice(1, -1)
    tan_err = np.hypot(xp[inner] - np.cos(th[inner]), zp[inner] - np.sin(th[inner]))
    curv_err = np.abs(thp[inner] - curve.kappa[inner])
    return float(tan_err.max()), float(curv_err.max())


def validate_curve(s, x, z, theta, kappa, *, tol_geom=TOL_GEOM):
    """Build a ``PlanarCurve`` after checking monotone arc length and Frenet consistency."""
    arrays = [np.asarray(a, dtype=float).ravel() for a in (s, x, z, theta, kappa)]
    n = arrays[0].size
    if any(a.size != n for a in arrays):
        raise ParameterError("all sample columns must have the same length")
    if n < MIN_SAMPLES:
        raise ParameterError(f"need at least {MIN_SAMPLES} samples, got {n}")
    if not np.all(np.isfinite(np.stack(arrays))):
        raise ParameterError("non-finite sample values")
    if np.any(np.diff(arrays[0]) <= 0):
        raise NonMonotonicArcLength("arc length must be strictly increasing")
    curve = PlanarCurve(*arrays)
    tan_err, curv_err = geometry_defects(curve)
    if tan_err > tol_geom:
        raise TangentInconsistent(f"tangent defect {tan_err:.3e} exceeds {tol_geom:.1e}")
    if curv_err > tol_geom:
        raise CurvatureInconsistent(f"curvature defect {curv_err:.3e} exceeds {tol_geom:.1e}")
    return curve


def frenet(theta):
    """Unit tangent and normal for tangent angle(s) ``theta``; arrays have a trailing axis of 2."""
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    T = np.stack([c, s], axis=-1)
    N = np.stack([-s, c], axis=-1)
    return T, N


def cylinder_view(curve, n):
    if int(n) != n or n < 1:
        raise ParameterError("n must be a positive integer")
    n = int(n)
    return CylinderView(n=n, H=curve.kappa / n, A2=curve.kappa**2, nu_vert=curve.nu_vert)


def uniform_grid(s0, s1, h):
    length = s1 - s0
    if h <= 0 or not np.isfinite(h):
        raise StepTooLarge("step must be positive")
    if h >= length:
        raise StepTooLarge(f"step {h} not smaller than curve extent {length}")
    count = int(np.floor(length / h + 1e-9))
    grid = s0 + h * np.arange(count + 1)
    return grid[grid <= s1 + 1e-12 * max(1.0, abs(s1))]


def resample_uniform(curve, h, *, tol_geom=TOL_GEOM):
    """Interpolate onto ``s0, s0 + h, ...``.

    x, z and theta use cubic Hermite pieces with their known derivatives
    (cos theta, sin theta, kappa); kappa uses a cubic spline.
    """
    grid = uniform_grid(float(curve.s[0]), float(curve.s[-1]), h)
    th = np.unwrap(curve.theta)
    x = CubicHermiteSpline(curve.s, curve.x, np.cos(th))(grid)
    z = CubicHermiteSpline(curve.s, curve.z, np.sin(th))(grid)
    theta = CubicHermiteSpline(curve.s, th, curve.kappa)(grid)
    kappa = CubicSpline(curve.s, curve.kappa)(grid)
    return validate_curve(grid, x, z, theta, kappa, tol_geom=tol_geom)


def ensure_uniform(curve, h=None, *, tol_geom=TOL_GEOM):
    """Return ``curve`` itself when already uniform at step ``h`` (or any step if ``h`` is None)."""
    if curve.is_uniform and (h is None or abs(grid_step(curve.s) - h) <= 1e-12 * h):
        return curve
    if h is None:
        h = curve.length / (curve.size - 1)
    return resample_uniform(curve, h, tol_geom=tol_geom)


def graph_from_function(f, fp, x0, x1, h, fpp=None):
    count = int(round((x1 - x0) / h))
    x = np.linspace(x0, x1, count + 1)
    return GraphCurve(x=x, f=f(x), fp=fp(x), fpp=None if fpp is None else fpp(x))
