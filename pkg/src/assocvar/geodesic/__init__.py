"""Numeric geodesics on the real points of an affine chart.

A geodesic here is an autoparallel of the connection induced by the
ambient Euclidean metric, computed without symbolic Christoffel data:
free Euclidean step, Newton projection back onto the constraint set,
tangent projection of the velocity, unit-speed renormalization.

The stepping loop runs in a compiled Cython kernel when the extension was
built; otherwise a pure-Python twin with identical semantics is selected
at import (forceable via ASSOCVAR_PURE_PY=1).  The benchmark script under
``benchmarks/`` compares the two.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ..errors import ProjectionError, SingularityError
from .chart import RealChart, chart_from_text  # noqa: F401
from . import _kernel_py

if os.environ.get("ASSOCVAR_PURE_PY") == "1":
    _impl = _kernel_py
else:
    try:
        from . import _kernel_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernel_py

KERNEL_NAME = "compiled" if _impl is not _kernel_py else "python"

PROJECTION_TOL = 1e-12
MAX_NEWTON = 50


def _kernel_args(chart: RealChart):
    if _impl is _kernel_py:
        c = chart.compiled()
        return (c.m, c.nrels, c.rel_ptr, c.coef, c.expo, c.grad_ptr, c.gcoef, c.gexpo)
    return chart.arrays()


def _raise_for(status: int, where: str):
    if status == _kernel_py.NO_CONVERGE:
        raise ProjectionError(f"Newton projection did not converge {where}")
    if status == _kernel_py.RANK_DEFICIENT:
        raise SingularityError(f"rank-deficient constraint Jacobian {where}")


def project_to_chart(x0, chart: RealChart, tol: float = PROJECTION_TOL,
                     maxit: int = MAX_NEWTON) -> np.ndarray:
    """Newton least-squares projection; |relation| <= tol at the result."""
    x0 = [float(v) for v in x0]
    if len(x0) != chart.m:
        raise ProjectionError(f"expected {chart.m} coordinates, got {len(x0)}")
    status, x = _impl.project(*_kernel_args(chart), x0, tol, maxit)
    _raise_for(status, f"from {x0}")
    return np.asarray(x)


def tangent_project(v, x, chart: RealChart) -> np.ndarray:
    """Euclidean-orthogonal projection of v onto the tangent space at x."""
    v = [float(t) for t in v]
    x = [float(t) for t in x]
    status, w = _impl.tangent_project(*_kernel_args(chart), x, v)
    _raise_for(status, f"at {x}")
    return np.asarray(w)


@dataclass(frozen=True)
class GeodesicState:
    position: np.ndarray
    velocity: np.ndarray


@dataclass
class GeodesicTrace:
    """Sampled states with arc-length stamps and self-computed diagnostics."""

    arcs: np.ndarray
    positions: np.ndarray  # (k, m)
    velocities: np.ndarray  # (k, m)
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.arcs)

    def state(self, i: int) -> GeodesicState:
        return GeodesicState(self.positions[i], self.velocities[i])

    @property
    def endpoint(self) -> np.ndarray:
        return self.positions[-1]


def integrate_geodesic(chart: RealChart, p0, v0, length: float, step: float,
                       proj_tol: float = PROJECTION_TOL) -> GeodesicTrace:
    """Trace the unit-speed geodesic from p0 in direction v0 for the given
    arc length, sampling every ``step`` of arc length."""
    if step <= 0:
        raise ProjectionError(f"step must be positive, got {step}")
    if length < 0:
        raise ProjectionError(f"length must be nonnegative, got {length}")
    x = project_to_chart(p0, chart, tol=proj_tol)
    v = tangent_project(v0, x, chart)
    norm = float(np.linalg.norm(v))
    if norm < 1e-13:
        raise SingularityError(
            "initial direction has no tangential component at the start point"
        )
    v = v / norm
    status, pos_flat, vel_flat, arcs = _impl.integrate(
        *_kernel_args(chart), list(map(float, x)), list(map(float, v)),
        float(length), float(step), proj_tol, MAX_NEWTON
    )
    arcs = np.asarray(arcs)
    positions = np.asarray(pos_flat).reshape(-1, chart.m)
    velocities = np.asarray(vel_flat).reshape(-1, chart.m)
    if status != _kernel_py.OK:
        _raise_for(status, f"mid-trajectory at arc length {arcs[-1]:.6g}")
    residuals = chart.residuals_many(positions)
    max_constraint = float(np.max(np.abs(residuals))) if residuals.size else 0.0
    speeds = np.linalg.norm(velocities, axis=1)
    max_speed_drift = float(np.max(np.abs(speeds - 1.0)))
    trace = GeodesicTrace(
        arcs,
        positions,
        velocities,
        diagnostics={
            "kernel": KERNEL_NAME,
            "step": float(step),
            "length": float(length),
            "projection_tol": proj_tol,
            "max_constraint": max_constraint,
            "max_speed_drift": max_speed_drift,
            "samples": int(len(arcs)),
        },
    )
    return trace


def speed_profile(trace: GeodesicTrace) -> float:
    """Max deviation of the sampled speeds from 1."""
    speeds = np.linalg.norm(trace.velocities, axis=1)
    return float(np.max(np.abs(speeds - 1.0)))
