#!/usr/bin/env python3
"""Benchmark the compiled geodesic kernel against the pure-Python twin.

Runs the same integrations through both implementations and reports
wall-clock times and the max deviation between the produced traces
(which should be exactly zero: the kernels share one algorithm).
"""

import math
import time

import numpy as np

from assocvar.geodesic import chart_from_text
from assocvar.geodesic import _kernel_py

try:
    from assocvar.geodesic import _kernel_c
except ImportError:
    _kernel_c = None

CASES = [
    ("circle quarter, h=1e-4", "field R; gens x y; rel x*x + y*y - 1",
     [1.0, 0.0], [0.0, 1.0], math.pi / 2, 1e-4),
    ("sphere great circle, h=1e-4", "field R; gens x y z; rel x*x + y*y + z*z - 1",
     [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 2 * math.pi, 1e-4),
    ("sphere great circle, h=1e-3", "field R; gens x y z; rel x*x + y*y + z*z - 1",
     [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 2 * math.pi, 1e-3),
]


def run(kernel, chart, p0, v0, length, step, as_arrays):
    if as_arrays:
        args = chart.arrays()
    else:
        c = chart.compiled()
        args = (c.m, c.nrels, c.rel_ptr, c.coef, c.expo, c.grad_ptr, c.gcoef, c.gexpo)
    t0 = time.perf_counter()
    status, pos, vel, arcs = kernel.integrate(
        *args, p0, v0, length, step, 1e-12, 50
    )
    dt = time.perf_counter() - t0
    assert status == 0, f"kernel status {status}"
    return dt, np.asarray(pos)


def main():
    print(f"{'case':35s} {'python':>10s} {'compiled':>10s} {'speedup':>8s} {'max|diff|':>10s}")
    for name, text, p0, v0, length, step in CASES:
        chart = chart_from_text(text)
        t_py, pos_py = run(_kernel_py, chart, p0, v0, length, step, as_arrays=False)
        if _kernel_c is None:
            print(f"{name:35s} {t_py:9.3f}s   (compiled kernel not built)")
            continue
        t_c, pos_c = run(_kernel_c, chart, p0, v0, length, step, as_arrays=True)
        diff = float(np.max(np.abs(pos_py - pos_c)))
        print(f"{name:35s} {t_py:9.3f}s {t_c:9.3f}s {t_py / t_c:7.1f}x {diff:10.2e}")


if __name__ == "__main__":
    main()
