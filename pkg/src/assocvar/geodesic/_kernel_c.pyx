# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integrator kernel: the typed twin of ``_kernel_py``.

Same status codes, same signatures, same stepping scheme; array arguments
arrive as numpy buffers instead of lists.
"""

from libc.stdlib cimport malloc, free
from libc.math cimport fabs, sqrt

OK = 0
NO_CONVERGE = 1
RANK_DEFICIENT = 2

cdef double _PIVOT_TOL = 1e-13


cdef void _eval_rels(int m, int nrels, long[::1] rel_ptr, double[::1] coef,
                     long[::1] expo, double* x, double* out) nogil:
    cdef int r, t, j
    cdef long e
    cdef double acc, v, xj
    for r in range(nrels):
        acc = 0.0
        for t in range(rel_ptr[r], rel_ptr[r + 1]):
            v = coef[t]
            for j in range(m):
                e = expo[t * m + j]
                if e:
                    xj = x[j]
                    if e == 1:
                        v *= xj
                    elif e == 2:
                        v *= xj * xj
                    else:
                        while e > 0:
                            v *= xj
                            e -= 1
            acc += v
        out[r] = acc


cdef void _eval_jac(int m, int nrels, long[::1] grad_ptr, double[::1] gcoef,
                    long[::1] gexpo, double* x, double* jac) nogil:
    cdef int idx, t, j
    cdef long e
    cdef double acc, v, xj
    for idx in range(nrels * m):
        acc = 0.0
        for t in range(grad_ptr[idx], grad_ptr[idx + 1]):
            v = gcoef[t]
            for j in range(m):
                e = gexpo[t * m + j]
                if e:
                    xj = x[j]
                    if e == 1:
                        v *= xj
                    elif e == 2:
                        v *= xj * xj
                    else:
                        while e > 0:
                            v *= xj
                            e -= 1
            acc += v
        jac[idx] = acc


cdef bint _solve_inplace(int n, double* a, double* b) nogil:
    cdef int c, i, j, piv
    cdef double best, cand, d, f, s
    for c in range(n):
        piv = c
        best = fabs(a[c * n + c])
        for i in range(c + 1, n):
            cand = fabs(a[i * n + c])
            if cand > best:
                best = cand
                piv = i
        if best < _PIVOT_TOL:
            return 0
        if piv != c:
            for j in range(n):
                d = a[c * n + j]
                a[c * n + j] = a[piv * n + j]
                a[piv * n + j] = d
            d = b[c]
            b[c] = b[piv]
            b[piv] = d
        d = a[c * n + c]
        for i in range(c + 1, n):
            f = a[i * n + c] / d
            if f != 0.0:
                for j in range(c, n):
                    a[i * n + j] -= f * a[c * n + j]
                b[i] -= f * b[c]
    for c in range(n - 1, -1, -1):
        s = b[c]
        for j in range(c + 1, n):
            s -= a[c * n + j] * b[j]
        b[c] = s / a[c * n + c]
    return 1


def project(int m, int nrels, long[::1] rel_ptr, double[::1] coef,
            long[::1] expo, long[::1] grad_ptr, double[::1] gcoef,
            long[::1] gexpo, x_in, double tol, int maxit):
    cdef double* x = <double*> malloc(m * sizeof(double))
    cdef double* res = <double*> malloc(max(nrels, 1) * sizeof(double))
    cdef double* jac = <double*> malloc(max(nrels * m, 1) * sizeof(double))
    cdef double* jjt = <double*> malloc(max(nrels * nrels, 1) * sizeof(double))
    cdef double* lam = <double*> malloc(max(nrels, 1) * sizeof(double))
    cdef int j, i, k, it, status
    cdef double worst, s
    for j in range(m):
        x[j] = x_in[j]
    status = NO_CONVERGE if nrels else OK
    for it in range(maxit if nrels else 0):
        _eval_rels(m, nrels, rel_ptr, coef, expo, x, res)
        worst = 0.0
        for i in range(nrels):
            if fabs(res[i]) > worst:
                worst = fabs(res[i])
        if worst <= tol:
            status = OK
            break
        _eval_jac(m, nrels, grad_ptr, gcoef, gexpo, x, jac)
        for i in range(nrels):
            for k in range(i, nrels):
                s = 0.0
                for j in range(m):
                    s += jac[i * m + j] * jac[k * m + j]
                jjt[i * nrels + k] = s
                jjt[k * nrels + i] = s
            lam[i] = res[i]
        if not _solve_inplace(nrels, jjt, lam):
            status = RANK_DEFICIENT
            break
        for j in range(m):
            s = 0.0
            for i in range(nrels):
                s += jac[i * m + j] * lam[i]
            x[j] -= s
    out = [x[j] for j in range(m)]
    free(x); free(res); free(jac); free(jjt); free(lam)
    return status, out


def tangent_project(int m, int nrels, long[::1] rel_ptr, double[::1] coef,
                    long[::1] expo, long[::1] grad_ptr, double[::1] gcoef,
                    long[::1] gexpo, x_in, v_in):
    cdef double* x = <double*> malloc(m * sizeof(double))
    cdef double* v = <double*> malloc(m * sizeof(double))
    cdef double* jac = <double*> malloc(max(nrels * m, 1) * sizeof(double))
    cdef double* jjt = <double*> malloc(max(nrels * nrels, 1) * sizeof(double))
    cdef double* rhs = <double*> malloc(max(nrels, 1) * sizeof(double))
    cdef int i, j, k, status
    cdef double s
    for j in range(m):
        x[j] = x_in[j]
        v[j] = v_in[j]
    status = OK
    if nrels:
        _eval_jac(m, nrels, grad_ptr, gcoef, gexpo, x, jac)
        for i in range(nrels):
            for k in range(i, nrels):
                s = 0.0
                for j in range(m):
                    s += jac[i * m + j] * jac[k * m + j]
                jjt[i * nrels + k] = s
                jjt[k * nrels + i] = s
            s = 0.0
            for j in range(m):
                s += jac[i * m + j] * v[j]
            rhs[i] = s
        if not _solve_inplace(nrels, jjt, rhs):
            status = RANK_DEFICIENT
        else:
            for j in range(m):
                s = 0.0
                for i in range(nrels):
                    s += jac[i * m + j] * rhs[i]
                v[j] -= s
    out = [v[j] for j in range(m)]
    free(x); free(v); free(jac); free(jjt); free(rhs)
    return status, out


def integrate(int m, int nrels, long[::1] rel_ptr, double[::1] coef,
              long[::1] expo, long[::1] grad_ptr, double[::1] gcoef,
              long[::1] gexpo, p0, v0, double length, double step,
              double proj_tol, int max_newton):
    cdef double* x = <double*> malloc(m * sizeof(double))
    cdef double* v = <double*> malloc(m * sizeof(double))
    cdef double* res = <double*> malloc(max(nrels, 1) * sizeof(double))
    cdef double* jac = <double*> malloc(max(nrels * m, 1) * sizeof(double))
    cdef double* jjt = <double*> malloc(max(nrels * nrels, 1) * sizeof(double))
    cdef double* lam = <double*> malloc(max(nrels, 1) * sizeof(double))
    cdef int i, j, k, it, status
    cdef bint converged
    cdef double h, worst, s, norm, s_done, remaining
    for j in range(m):
        x[j] = p0[j]
        v[j] = v0[j]
    positions = [p0[j] for j in range(m)]
    velocities = [v0[j] for j in range(m)]
    arcs = [0.0]
    status = OK
    s_done = 0.0
    remaining = length
    while remaining > 1e-15:
        h = step if step <= remaining else remaining
        for j in range(m):
            x[j] += h * v[j]
        if nrels:
            converged = 0
            for it in range(max_newton):
                _eval_rels(m, nrels, rel_ptr, coef, expo, x, res)
                worst = 0.0
                for i in range(nrels):
                    if fabs(res[i]) > worst:
                        worst = fabs(res[i])
                if worst <= proj_tol:
                    converged = 1
                    break
                _eval_jac(m, nrels, grad_ptr, gcoef, gexpo, x, jac)
                for i in range(nrels):
                    for k in range(i, nrels):
                        s = 0.0
                        for j in range(m):
                            s += jac[i * m + j] * jac[k * m + j]
                        jjt[i * nrels + k] = s
                        jjt[k * nrels + i] = s
                    lam[i] = res[i]
                if not _solve_inplace(nrels, jjt, lam):
                    status = RANK_DEFICIENT
                    break
                for j in range(m):
                    s = 0.0
                    for i in range(nrels):
                        s += jac[i * m + j] * lam[i]
                    x[j] -= s
            if status != OK:
                break
            if not converged:
                status = NO_CONVERGE
                break
            _eval_jac(m, nrels, grad_ptr, gcoef, gexpo, x, jac)
            for i in range(nrels):
                for k in range(i, nrels):
                    s = 0.0
                    for j in range(m):
                        s += jac[i * m + j] * jac[k * m + j]
                    jjt[i * nrels + k] = s
                    jjt[k * nrels + i] = s
                s = 0.0
                for j in range(m):
                    s += jac[i * m + j] * v[j]
                lam[i] = s
            if not _solve_inplace(nrels, jjt, lam):
                status = RANK_DEFICIENT
                break
            for j in range(m):
                s = 0.0
                for i in range(nrels):
                    s += jac[i * m + j] * lam[i]
                v[j] -= s
            norm = 0.0
            for j in range(m):
                norm += v[j] * v[j]
            norm = sqrt(norm)
            if norm < 1e-13:
                status = RANK_DEFICIENT
                break
            for j in range(m):
                v[j] /= norm
        s_done += h
        remaining -= h
        for j in range(m):
            positions.append(x[j])
            velocities.append(v[j])
        arcs.append(s_done)
    free(x); free(v); free(res); free(jac); free(jjt); free(lam)
    return status, positions, velocities, arcs
