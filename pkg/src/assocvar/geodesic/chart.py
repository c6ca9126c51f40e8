"""Real affine charts: float-evaluable commutative constraint systems.

A chart is built from a presentation over R (or Q, floated): relations
are abelianized into exponent-vector polynomials (commutators collapse to
zero and drop out), and gradients are formed by exact exponent
arithmetic.  The compiled form is a handful of flat arrays shared by both
integrator kernels; diagnostics evaluate the constraints over whole
traces with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FieldError, ParseError
from ..fields import PrimeField
from ..freealg import Presentation


def _abelian_terms(rel, m):
    """Collect a relation into {exponent vector: float coefficient}."""
    terms: dict = {}
    for w, c in rel.terms.items():
        e = [0] * m
        for i in w:
            e[i] += 1
        e = tuple(e)
        terms[e] = terms.get(e, 0.0) + float(c)
    return {e: c for e, c in terms.items() if c != 0.0}


def _grad_terms(terms, v):
    out = {}
    for e, c in terms.items():
        if e[v]:
            e2 = e[:v] + (e[v] - 1,) + e[v + 1 :]
            out[e2] = out.get(e2, 0.0) + c * e[v]
    return out


@dataclass
class CompiledChart:
    """Flat-array form consumed by the integrator kernels."""

    m: int
    nrels: int
    rel_ptr: list
    coef: list
    expo: list
    grad_ptr: list
    gcoef: list
    gexpo: list

    def as_arrays(self):
        return (
            self.m,
            self.nrels,
            np.asarray(self.rel_ptr, dtype=np.int64),
            np.asarray(self.coef, dtype=np.float64),
            np.asarray(self.expo, dtype=np.int64),
            np.asarray(self.grad_ptr, dtype=np.int64),
            np.asarray(self.gcoef, dtype=np.float64),
            np.asarray(self.gexpo, dtype=np.int64),
        )


class RealChart:
    """Z(J) inside R^m for the abelianized relations of a presentation."""

    def __init__(self, pres: Presentation):
        if isinstance(pres.field, PrimeField):
            raise FieldError("real charts need field R or Q, not a prime field")
        self.m = len(pres.gens)
        self.names = pres.gens
        polys = []
        for r in pres.rels:
            t = _abelian_terms(r, self.m)
            if t:
                polys.append(sorted(t.items()))
        self.polys = polys
        self.grads = [
            [sorted(_grad_terms(dict(t), v).items()) for v in range(self.m)]
            for t in polys
        ]
        self._compiled: CompiledChart | None = None
        self._arrays = None

    @property
    def nrels(self) -> int:
        return len(self.polys)

    def compiled(self) -> CompiledChart:
        if self._compiled is None:
            rel_ptr, coef, expo = [0], [], []
            for t in self.polys:
                for e, c in t:
                    coef.append(c)
                    expo.extend(e)
                rel_ptr.append(len(coef))
            grad_ptr, gcoef, gexpo = [0], [], []
            for r in range(len(self.polys)):
                for v in range(self.m):
                    for e, c in self.grads[r][v]:
                        gcoef.append(c)
                        gexpo.extend(e)
                    grad_ptr.append(len(gcoef))
            self._compiled = CompiledChart(
                self.m, len(self.polys), rel_ptr, coef, expo, grad_ptr, gcoef, gexpo
            )
        return self._compiled

    def arrays(self):
        if self._arrays is None:
            self._arrays = self.compiled().as_arrays()
        return self._arrays

    # -- reference (numpy) evaluators --------------------------------------

    def residuals(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty(self.nrels)
        for i, t in enumerate(self.polys):
            acc = 0.0
            for e, c in t:
                v = c
                for j, ej in enumerate(e):
                    if ej:
                        v *= x[j] ** ej
                acc += v
            out[i] = acc
        return out

    def jacobian(self, x):
        x = np.asarray(x, dtype=float)
        jac = np.empty((self.nrels, self.m))
        for r in range(self.nrels):
            for v in range(self.m):
                acc = 0.0
                for e, c in self.grads[r][v]:
                    val = c
                    for j, ej in enumerate(e):
                        if ej:
                            val *= x[j] ** ej
                    acc += val
                jac[r, v] = acc
        return jac

    def residuals_many(self, xs):
        """Constraint values over an (n, m) array of samples, shape (n, nrels)."""
        xs = np.asarray(xs, dtype=float)
        out = np.zeros((xs.shape[0], self.nrels))
        for i, t in enumerate(self.polys):
            for e, c in t:
                v = np.full(xs.shape[0], c)
                for j, ej in enumerate(e):
                    if ej:
                        v = v * xs[:, j] ** ej
                out[:, i] += v
        return out

    def jacobian_fd_error(self, x, h: float = 1e-6) -> float:
        """Max relative deviation of the exact Jacobian from central
        differences at x (chart self-check)."""
        x = np.asarray(x, dtype=float)
        jac = self.jacobian(x)
        fd = np.empty_like(jac)
        for v in range(self.m):
            step = np.zeros(self.m)
            step[v] = h
            fd[:, v] = (self.residuals(x + step) - self.residuals(x - step)) / (2 * h)
        scale = np.maximum(np.abs(jac), 1.0)
        return float(np.max(np.abs(jac - fd) / scale)) if jac.size else 0.0


def chart_from_text(text: str) -> RealChart:
    from ..freealg import parse_presentation

    pres = parse_presentation(text)
    return RealChart(pres)
