"""Small grid utilities: uniformity test, finite differences, composite Simpson."""

import numpy as np


def is_uniform(s, rtol=1e-9):
    s = np.asarray(s, dtype=float)
    if s.size < 2:
        return False
    ds = np.diff(s)
    return bool(np.all(np.abs(ds - ds.mean()) <= rtol * max(abs(ds.mean()), 1e-300)))


def grid_step(s):
    s = np.asarray(s, dtype=float)
    return (s[-1] - s[0]) / (s.size - 1)


def d1_uniform(y, h):
    """Fourth-order first derivative on a uniform grid (one-sided 5-point at the ends)."""
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 5:
        return np.gradient(y, h)
    out = np.empty_like(y)
    out[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)
    out[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h)
    out[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h)
    out[-1] = (25.0 * y[-1] - 48.0 * y[-2] + 36.0 * y[-3] - 16.0 * y[-4] + 3.0 * y[-5]) / (12.0 * h)
    out[-2] = (3.0 * y[-1] + 10.0 * y[-2] - 18.0 * y[-3] + 6.0 * y[-4] - y[-5]) / (12.0 * h)
    return out


def d1(y, s):
    """First derivative against ``s``: fourth order if ``s`` is uniform, else second order."""
    s = np.asarray(s, dtype=float)
    if is_uniform(s):
        return d1_uniform(y, grid_step(s))
    return np.gradient(np.asarray(y, dtype=float), s)


def d2_central(y, h):
    """Three-point second difference at interior nodes; the two end values are NaN."""
    y = np.asarray(y, dtype=float)
    out = np.full_like(y, np.nan)
    out[1:-1] = (y[:-2] - 2.0 * y[1:-1] + y[2:]) / (h * h)
    return out


def simpson_uniform(y, h):
    """Composite Simpson rule; an odd interval count closes with the 3/8 rule."""
    y = np.asarray(y, dtype=float)
    n = y.size - 1
    if n < 1:
        return 0.0
    if n == 1:
        return 0.5 * h * (y[0] + y[1])
    if n % 2 == 0:
        return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())
    if n == 3:
        return 3.0 * h / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3])
    head = y[:-3]
    tail = y[-4:]
    return (h / 3.0 * (head[0] + head[-1] + 4.0 * head[1:-1:2].sum() + 2.0 * head[2:-1:2].sum())
            + 3.0 * h / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3]))


def simpson(y, s):
    s = np.asarray(s, dtype=float)
    if not is_uniform(s):
        raise ValueError("simpson requires a uniform grid; resample first")
    return simpson_uniform(y, grid_step(s))
