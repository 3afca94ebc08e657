"""CSV, JSON and SVG serialization.

Curve CSV: header ``s,x,z,theta,kappa``.  Graph CSV: header ``x,f,fp``.
Numbers are written with ``%.17g`` so a write/read cycle is exact.
"""

import json
import sys
from pathlib import Path

import numpy as np

from .curve import GraphCurve, PlanarCurve, TOL_GEOM, validate_curve
from .errors import ParameterError

CURVE_HEADER = ("s", "x", "z", "theta", "kappa")
GRAPH_HEADER = ("x", "f", "fp")
FMT = "%.17g"


def _write_table(path, header, columns):
    data = np.column_stack(columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        np.savetxt(fh, data, fmt=FMT, delimiter=",", header=",".join(header), comments="")


def _read_table(path):
    with open(path, encoding="utf-8") as fh:
        header = tuple(h.strip() for h in fh.readline().strip().split(","))
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, data


def write_curve_csv(path, curve):
    _write_table(path, CURVE_HEADER, [curve.s, curve.x, curve.z, curve.theta, curve.kappa])


def write_graph_csv(path, g):
    _write_table(path, GRAPH_HEADER, [g.x, g.f, g.fp])


def read_curve_csv(path, validate=True, tol_geom=TOL_GEOM):
    header, data = _read_table(path)
    if header != CURVE_HEADER:
        raise ParameterError(f"{path}: expected header {','.join(CURVE_HEADER)}")
    cols = [data[:, i] for i in range(5)]
    if validate:
        return validate_curve(*cols, tol_geom=tol_geom)
    return PlanarCurve(*cols)


def read_graph_csv(path):
    header, data = _read_table(path)
    if header != GRAPH_HEADER:
        raise ParameterError(f"{path}: expected header {','.join(GRAPH_HEADER)}")
    return GraphCurve(x=data[:, 0], f=data[:, 1], fp=data[:, 2])


def read_any_csv(path, validate=True):
    """Curve or graph, chosen by the header line."""
    with open(path, encoding="utf-8") as fh:
        header = tuple(h.strip() for h in fh.readline().strip().split(","))
    if header == GRAPH_HEADER:
        return read_graph_csv(path)
    return read_curve_csv(path, validate=validate)


def _default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj, compact=False):
    if compact:
        return json.dumps(obj, default=_default, separators=(",", ":"))
    return json.dumps(obj, default=_default, indent=2)


def write_json(obj, path=None, compact=False):
    """Write ``obj`` to ``path``, or to stdout when ``path`` is None."""
    text = dumps(obj, compact) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_svg(path, x, z, size=480, margin=12):
    """Polyline of ``(x, z)`` with equal axis scaling; z points up."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    span = max(np.ptp(x), np.ptp(z), 1e-12)
    scale = (size - 2 * margin) / span
    px = margin + (x - x.min()) * scale
    pz = size - margin - (z - z.min()) * scale
    points = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(px, pz))
    svg = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">\n'
           f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{points}"/>\n'
           "</svg>\n")
    Path(path).write_text(svg, encoding="utf-8")
