"""Time the numba kernels against the pure-NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

The fallback column is measured in a child process started with
CYLCRIT_DISABLE_NUMBA=1, so nested kernel calls are also uncompiled.
Compilation happens in a warmup call and is not timed.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from cylcrit import kernels
from cylcrit._accel import backend_name


def _cases():
    n = 2000
    diag = 2.0 + np.linspace(0.0, 1.0, n)
    off = -np.ones(n - 1)
    u = np.sin(np.linspace(0.0, np.pi, n))
    return {
        "rk4_singular": (kernels.rk4_singular, (1.0, 0.0, 0.0, 1.0, 0.0, 1e-3, 2000, 1e-8)),
        "rk4_stationary": (kernels.rk4_stationary, (1.0, -2.0, 0.0, 0.0, 1.0, 0.0, 1e-3, 2000, 1e-8, True)),
        "rk4_elastic": (kernels.rk4_elastic, (0.5, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1e-3, 2000)),
        "rk4_graph": (kernels.rk4_graph, (1.0, 1.0, 0.0, -1.0, 1.0, -0.8, 1e-3, 2000, 1e-8, False, 1e8)),
        "bisect_lowest": (kernels.bisect_lowest, (diag, off, -2.0, 8.0, 1e-14, 200)),
        "laplacian": (kernels.laplacian_dirichlet, (u, 1e-3)),
    }


def _best(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def measure(repeat):
    kernels.warmup()
    return {name: _best(fn, fargs, repeat) for name, (fn, fargs) in _cases().items()}


def _fallback(repeat):
    env = dict(os.environ, CYLCRIT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(measure(args.repeat)))
        return
    fast = measure(args.repeat)
    slow = _fallback(max(1, args.repeat // 2))
    print(f"backend: {backend_name()}")
    print(f"{'kernel':<16}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name in fast:
        print(f"{name:<16}{fast[name] * 1e3:>12.3f}{slow[name] * 1e3:>12.3f}{slow[name] / fast[name]:>10.1f}")


if __name__ == "__main__":
    main()
