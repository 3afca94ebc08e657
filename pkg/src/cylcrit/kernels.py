"""Hot inner loops: fixed-step RK4 integrators and Sturm-sequence bisection.

Every function here is decorated with :func:`cylcrit._accel.jit`; with
``CYLCRIT_DISABLE_NUMBA=1`` the identical source runs under CPython.
Kernels report failures through integer status codes because exceptions do
not cross the numba boundary cleanly.
"""

import math

import numpy as np

from ._accel import jit

OK = 0
HEIGHT = 1
DOMAIN = 2
NONFINITE = 3
BLOWUP_UP = 4
BLOWUP_DOWN = 5


@jit
def _singular_rhs(alpha, varpi, z, th):
    c = math.cos(th)
    return c, math.sin(th), alpha * c / z + varpi


@jit
def rk4_singular(alpha, varpi, x0, z0, th0, h, nsteps, zguard):
    """Integrate ``x' = cos th, z' = sin th, th' = alpha cos th / z + varpi``.

    Returns ``(out, count, status)`` with ``out[:, :4] = x, z, th, kappa``;
    only the first ``count`` rows are valid.
    """
    out = np.empty((nsteps + 1, 4))
    x, z, th = x0, z0, th0
    if z < zguard:
        return out, 0, HEIGHT
    out[0, 0] = x
    out[0, 1] = z
    out[0, 2] = th
    out[0, 3] = alpha * math.cos(th) / z + varpi
    for i in range(nsteps):
        k1x, k1z, k1t = _singular_rhs(alpha, varpi, z, th)
        z2 = z + 0.5 * h * k1z
        if z2 < zguard:
            return out, i + 1, HEIGHT
        k2x, k2z, k2t = _singular_rhs(alpha, varpi, z2, th + 0.5 * h * k1t)
        z3 = z + 0.5 * h * k2z
        if z3 < zguard:
            return out, i + 1, HEIGHT
        k3x, k3z, k3t = _singular_rhs(alpha, varpi, z3, th + 0.5 * h * k2t)
        z4 = z + h * k3z
        if z4 < zguard:
            return out, i + 1, HEIGHT
        k4x, k4z, k4t = _singular_rhs(alpha, varpi, z4, th + h * k3t)
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        if z < zguard:
            return out, i + 1, HEIGHT
        kap = alpha * math.cos(th) / z + varpi
        if not (math.isfinite(x) and math.isfinite(z) and math.isfinite(kap)):
            return out, i + 1, NONFINITE
        out[i + 1, 0] = x
        out[i + 1, 1] = z
        out[i + 1, 2] = th
        out[i + 1, 3] = kap
    return out, nsteps + 1, OK


@jit
def _stationary_kappa(eta, m, lam, z):
    return eta * z**m + lam


@jit
def rk4_stationary(eta, m, lam, x0, z0, th0, h, nsteps, zguard, need_positive):
    """Integrate ``th' = eta z**m + lam`` in arc length (same layout as :func:`rk4_singular`)."""
    out = np.empty((nsteps + 1, 4))
    x, z, th = x0, z0, th0
    if need_positive and z < zguard:
        return out, 0, HEIGHT
    out[0, 0] = x
    out[0, 1] = z
    out[0, 2] = th
    out[0, 3] = _stationary_kappa(eta, m, lam, z)
    for i in range(nsteps):
        k1t = _stationary_kappa(eta, m, lam, z)
        c1, s1 = math.cos(th), math.sin(th)
        th2 = th + 0.5 * h * k1t
        z2 = z + 0.5 * h * s1
        if need_positive and z2 < zguard:
            return out, i + 1, HEIGHT
        k2t = _stationary_kappa(eta, m, lam, z2)
        c2, s2 = math.cos(th2), math.sin(th2)
        th3 = th + 0.5 * h * k2t
        z3 = z + 0.5 * h * s2
        if need_positive and z3 < zguard:
            return out, i + 1, HEIGHT
        k3t = _stationary_kappa(eta, m, lam, z3)
        c3, s3 = math.cos(th3), math.sin(th3)
        th4 = th + h * k3t
        z4 = z + h * s3
        if need_positive and z4 < zguard:
            return out, i + 1, HEIGHT
        k4t = _stationary_kappa(eta, m, lam, z4)
        c4, s4 = math.cos(th4), math.sin(th4)
        x += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        z += h / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4)
        th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        if need_positive and z < zguard:
            return out, i + 1, HEIGHT
        kap = _stationary_kappa(eta, m, lam, z)
        if not (math.isfinite(x) and math.isfinite(z) and math.isfinite(kap)):
            return out, i + 1, NONFINITE
        out[i + 1, 0] = x
        out[i + 1, 1] = z
        out[i + 1, 2] = th
        out[i + 1, 3] = kap
    return out, nsteps + 1, OK


@jit
def _elastic_shift(p, v):
    """``kappa - mu`` from ``v = (kappa - mu)**(p - 1)``; NaN outside the invertible branch."""
    if p == 2.0:
        return v
    if p == 0.0:
        if v == 0.0:
            return math.nan
        return 1.0 / v
    if v <= 0.0:
        return math.nan
    return v ** (1.0 / (p - 1.0))


@jit
def _elastic_rhs(p, mu, sigma, th, v, w):
    t = _elastic_shift(p, v)
    kap = mu + t
    tp = t**p
    wp = (kap * (tp + sigma) - p * kap * kap * v) / p
    return math.cos(th), math.sin(th), kap, w, wp


@jit
def rk4_elastic(p, mu, sigma, x0, z0, th0, v0, w0, h, nsteps):
    """Integrate the curvature Euler-Lagrange system in ``(x, z, th, v, v')``.

    ``v = (kappa - mu)**(p - 1)`` and ``v'' = [kappa((kappa-mu)**p + sigma) - p kappa**2 v] / p``.
    Output columns: ``x, z, th, kappa, v, v'``.
    """
    out = np.empty((nsteps + 1, 6))
    x, z, th, v, w = x0, z0, th0, v0, w0
    t0 = _elastic_shift(p, v)
    if not math.isfinite(t0):
        return out, 0, DOMAIN
    out[0, 0] = x
    out[0, 1] = z
    out[0, 2] = th
    out[0, 3] = mu + t0
    out[0, 4] = v
    out[0, 5] = w
    for i in range(nsteps):
        a1, b1, c1, d1, e1 = _elastic_rhs(p, mu, sigma, th, v, w)
        a2, b2, c2, d2, e2 = _elastic_rhs(p, mu, sigma, th + 0.5 * h * c1, v + 0.5 * h * d1, w + 0.5 * h * e1)
        a3, b3, c3, d3, e3 = _elastic_rhs(p, mu, sigma, th + 0.5 * h * c2, v + 0.5 * h * d2, w + 0.5 * h * e2)
        a4, b4, c4, d4, e4 = _elastic_rhs(p, mu, sigma, th + h * c3, v + h * d3, w + h * e3)
        if not (math.isfinite(e1) and math.isfinite(e2) and math.isfinite(e3) and math.isfinite(e4)):
            return out, i + 1, DOMAIN
        x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        z += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        th += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        v += h / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
        w += h / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4)
        t = _elastic_shift(p, v)
        if not math.isfinite(t):
            return out, i + 1, DOMAIN
        if not (math.isfinite(x) and math.isfinite(z) and math.isfinite(w)):
            return out, i + 1, NONFINITE
        out[i + 1, 0] = x
        out[i + 1, 1] = z
        out[i + 1, 2] = th
        out[i + 1, 3] = mu + t
        out[i + 1, 4] = v
        out[i + 1, 5] = w
    return out, nsteps + 1, OK


@jit
def _graph_rhs(eta, m, lam, f, fp, g, gp):
    w2 = 1.0 + fp * fp
    w = math.sqrt(w2)
    w3 = w2 * w
    zm = f**m
    fpp = (eta * zm + lam) * w3
    dF_df = eta * m * f ** (m - 1.0) * w3
    dF_dfp = (eta * zm + lam) * 3.0 * fp * w
    return fp, fpp, gp, dF_df * g + dF_dfp * gp, w


@jit
def rk4_graph(eta, m, lam, x0, f0, a, h, nsteps, zguard, need_positive, slope_cap):
    """Shoot ``f'' = (eta f**m + lam)(1 + f'**2)**1.5`` from ``f(x0) = f0, f'(x0) = a``.

    Also carries the slope sensitivity ``g = df/da`` and the arc length.
    Output columns: ``f, f', f'', g, g', s``.
    """
    out = np.empty((nsteps + 1, 6))
    f, fp, g, gp, s = f0, a, 0.0, 1.0, 0.0
    for i in range(nsteps + 1):
        if need_positive and f < zguard:
            return out, i, HEIGHT
        if not (math.isfinite(f) and math.isfinite(fp)):
            return out, i, NONFINITE
        if fp > slope_cap:
            return out, i, BLOWUP_UP
        if fp < -slope_cap:
            return out, i, BLOWUP_DOWN
        w2 = 1.0 + fp * fp
        out[i, 0] = f
        out[i, 1] = fp
        out[i, 2] = (eta * f**m + lam) * w2 * math.sqrt(w2)
        out[i, 3] = g
        out[i, 4] = gp
        out[i, 5] = s
        if i == nsteps:
            break
        a1, b1, c1, d1, e1 = _graph_rhs(eta, m, lam, f, fp, g, gp)
        fh = f + 0.5 * h * a1
        if need_positive and fh < zguard:
            return out, i + 1, HEIGHT
        a2, b2, c2, d2, e2 = _graph_rhs(eta, m, lam, fh, fp + 0.5 * h * b1, g + 0.5 * h * c1, gp + 0.5 * h * d1)
        fh = f + 0.5 * h * a2
        if need_positive and fh < zguard:
            return out, i + 1, HEIGHT
        a3, b3, c3, d3, e3 = _graph_rhs(eta, m, lam, fh, fp + 0.5 * h * b2, g + 0.5 * h * c2, gp + 0.5 * h * d2)
        fh = f + h * a3
        if need_positive and fh < zguard:
            return out, i + 1, HEIGHT
        a4, b4, c4, d4, e4 = _graph_rhs(eta, m, lam, fh, fp + h * b3, g + h * c3, gp + h * d3)
        f += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        fp += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        g += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        gp += h / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
        s += h / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4)
    return out, nsteps + 1, OK


@jit
def sturm_count(diag, off, x):
    """Number of eigenvalues below ``x`` of the symmetric tridiagonal matrix (diag, off)."""
    n = diag.size
    # zero pivots are nudged to -pivmin as in LAPACK's dstebz
    big = 1.0
    for i in range(n - 1):
        big = max(big, off[i] * off[i])
    pivmin = 1e-290 * big
    count = 0
    d = diag[0] - x
    if abs(d) < pivmin:
        d = -pivmin
    if d < 0.0:
        count += 1
    for i in range(1, n):
        d = diag[i] - x - off[i - 1] * off[i - 1] / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0.0:
            count += 1
    return count


@jit
def bisect_lowest(diag, off, lo, hi, tol, maxit):
    """Bisection on the Sturm count for the smallest eigenvalue inside ``[lo, hi]``."""
    for _ in range(maxit):
        mid = 0.5 * (lo + hi)
        if sturm_count(diag, off, mid) >= 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


@jit
def laplacian_dirichlet(u, h):
    """Second difference of ``u`` at interior nodes, fourth order away from the ends.

    The first and last interior nodes fall back to the three-point stencil;
    the boundary entries are set to zero.
    """
    n = u.size
    out = np.zeros(n)
    inv = 1.0 / (h * h)
    for i in range(1, n - 1):
        if i == 1 or i == n - 2:
            out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv
        else:
            out[i] = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) * inv / 12.0
    return out


def warmup():
    """Compile every kernel once (a no-op under the pure-Python path)."""
    rk4_singular(1.0, 0.0, 0.0, 1.0, 0.0, 1e-2, 4, 1e-8)
    rk4_stationary(1.0, -2.0, 0.0, 0.0, 1.0, 0.0, 1e-2, 4, 1e-8, True)
    rk4_elastic(2.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1e-2, 4)
    rk4_graph(1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1e-2, 4, 1e-8, False, 1e8)
    d = np.array([2.0, 2.0, 2.0])
    e = np.array([-1.0, -1.0])
    bisect_lowest(d, e, 0.0, 4.0, 1e-12, 200)
    laplacian_dirichlet(np.zeros(6), 0.1)
