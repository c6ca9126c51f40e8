"""Pure-Python integrator kernel.

Mirrors ``_kernel_c.pyx`` line for line where it matters; the compiled
twin is preferred at import time when available.  Everything here works
on flat Python lists of floats/ints and avoids per-step allocations in
the hot loop.

Status codes shared by both kernels:
    0  ok
    1  Newton projection failed to converge
    2  rank-deficient Jacobian (singular point)
"""

OK = 0
NO_CONVERGE = 1
RANK_DEFICIENT = 2

_PIVOT_TOL = 1e-13


def _eval_rels(m, nrels, rel_ptr, coef, expo, x, out):
    for r in range(nrels):
        acc = 0.0
        for t in range(rel_ptr[r], rel_ptr[r + 1]):
            v = coef[t]
            base = t * m
            for j in range(m):
                e = expo[base + j]
                if e:
                    xj = x[j]
                    if e == 1:
                        v *= xj
                    elif e == 2:
                        v *= xj * xj
                    else:
                        v *= xj**e
            acc += v
        out[r] = acc


def _eval_jac(m, nrels, grad_ptr, gcoef, gexpo, x, jac):
    for idx in range(nrels * m):
        acc = 0.0
        for t in range(grad_ptr[idx], grad_ptr[idx + 1]):
            v = gcoef[t]
            base = t * m
            for j in range(m):
                e = gexpo[base + j]
                if e:
                    xj = x[j]
                    if e == 1:
                        v *= xj
                    elif e == 2:
                        v *= xj * xj
                    else:
                        v *= xj**e
            acc += v
        jac[idx] = acc


def _solve_inplace(n, a, b):
    """Gaussian elimination with partial pivoting on flat a (n*n) and b.

    Returns False when the matrix is numerically singular.
    """
    for c in range(n):
        piv = c
        best = abs(a[c * n + c])
        for i in range(c + 1, n):
            cand = abs(a[i * n + c])
            if cand > best:
                best = cand
                piv = i
        if best < _PIVOT_TOL:
            return False
        if piv != c:
            for j in range(n):
                a[c * n + j], a[piv * n + j] = a[piv * n + j], a[c * n + j]
            b[c], b[piv] = b[piv], b[c]
        d = a[c * n + c]
        for i in range(c + 1, n):
            f = a[i * n + c] / d
            if f:
                for j in range(c, n):
                    a[i * n + j] -= f * a[c * n + j]
                b[i] -= f * b[c]
    for c in range(n - 1, -1, -1):
        s = b[c]
        for j in range(c + 1, n):
            s -= a[c * n + j] * b[j]
        b[c] = s / a[c * n + c]
    return True


def project(m, nrels, rel_ptr, coef, expo, grad_ptr, gcoef, gexpo, x, tol, maxit):
    """Gauss-Newton least-squares projection onto the chart.

    Returns (status, projected point as list).
    """
    x = list(x)
    if nrels == 0:
        return OK, x
    res = [0.0] * nrels
    jac = [0.0] * (nrels * m)
    jjt = [0.0] * (nrels * nrels)
    lam = [0.0] * nrels
    for _ in range(maxit):
        _eval_rels(m, nrels, rel_ptr, coef, expo, x, res)
        worst = 0.0
        for r in range(nrels):
            a = abs(res[r])
            if a > worst:
                worst = a
        if worst <= tol:
            return OK, x
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
            return RANK_DEFICIENT, x
        for j in range(m):
            s = 0.0
            for i in range(nrels):
                s += jac[i * m + j] * lam[i]
            x[j] -= s
    return NO_CONVERGE, x


def tangent_project(m, nrels, rel_ptr, coef, expo, grad_ptr, gcoef, gexpo, x, v):
    """Orthogonal projection of v onto the Jacobian null space at x.

    Returns (status, projected vector as list).
    """
    v = list(v)
    if nrels == 0:
        return OK, v
    jac = [0.0] * (nrels * m)
    jjt = [0.0] * (nrels * nrels)
    rhs = [0.0] * nrels
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
        return RANK_DEFICIENT, v
    for j in range(m):
        s = 0.0
        for i in range(nrels):
            s += jac[i * m + j] * rhs[i]
        v[j] -= s
    return OK, v


def integrate(
    m,
    nrels,
    rel_ptr,
    coef,
    expo,
    grad_ptr,
    gcoef,
    gexpo,
    p0,
    v0,
    length,
    step,
    proj_tol,
    max_newton,
):
    """Projected unit-speed stepping: free Euclidean step, Newton position
    projection, tangent velocity projection, renormalization.

    Returns (status, flat positions, flat velocities, arc stamps).
    """
    x = list(p0)
    v = list(v0)
    positions = list(x)
    velocities = list(v)
    arcs = [0.0]
    res = [0.0] * nrels
    jac = [0.0] * (nrels * m)
    jjt = [0.0] * (nrels * nrels)
    lam = [0.0] * nrels
    s_done = 0.0
    remaining = length
    while remaining > 1e-15:
        h = step if step <= remaining else remaining
        for j in range(m):
            x[j] += h * v[j]
        # -- Newton projection ------------------------------------------
        if nrels:
            converged = False
            for _ in range(max_newton):
                _eval_rels(m, nrels, rel_ptr, coef, expo, x, res)
                worst = 0.0
                for r in range(nrels):
                    a = abs(res[r])
                    if a > worst:
                        worst = a
                if worst <= proj_tol:
                    converged = True
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
                    return RANK_DEFICIENT, positions, velocities, arcs
                for j in range(m):
                    s = 0.0
                    for i in range(nrels):
                        s += jac[i * m + j] * lam[i]
                    x[j] -= s
            if not converged:
                return NO_CONVERGE, positions, velocities, arcs
            # -- tangent projection of the velocity ----------------------
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
                return RANK_DEFICIENT, positions, velocities, arcs
            for j in range(m):
                s = 0.0
                for i in range(nrels):
                    s += jac[i * m + j] * lam[i]
                v[j] -= s
            norm = 0.0
            for j in range(m):
                norm += v[j] * v[j]
            norm = norm**0.5
            if norm < 1e-13:
                return RANK_DEFICIENT, positions, velocities, arcs
            for j in range(m):
                v[j] /= norm
        s_done += h
        remaining -= h
        positions.extend(x)
        velocities.extend(v)
        arcs.append(s_done)
    return OK, positions, velocities, arcs
