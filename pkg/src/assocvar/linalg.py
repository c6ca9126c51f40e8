"""Dense linear algebra over an assocvar coefficient field.

Matrices are lists of lists of scalars; every routine takes the field
explicitly.  Over exact fields (Q, F_p) everything is exact; over floats
the pivot search takes the largest entry and rank decisions use the
field's zero tolerance.
"""

from __future__ import annotations

from .errors import FieldError
from .fields import Field


def zeros(field: Field, rows: int, cols: int):
    return [[field.zero] * cols for _ in range(rows)]


def identity(field: Field, n: int):
    m = zeros(field, n, n)
    for i in range(n):
        m[i][i] = field.one
    return m

def copy_matrix(m):
    return [row[:] for row in m]


def mat_add(field, a, b):
    return [[field.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(field, c, a):
    return [[field.mul(c, x) for x in row] for row in a]


def mat_mul(field, a, b):
    n, k = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = zeros(field, n, cols)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if field.is_zero(c):
                continue
            bt = b[t]
            for j in range(cols):
                oi[j] = field.add(oi[j], field.mul(c, bt[j]))
    return out


def mat_eq(field, a, b):
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        return False
    return all(
        field.is_zero(field.sub(x, y)) for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def is_zero_matrix(field, a):
    return all(field.is_zero(x) for row in a for x in row)


def rref(field: Field, rows):
    """Reduced row-echelon form; returns (rref_rows, pivot_columns).

    Input rows are not mutated.
    """
    m = [row[:] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        if field.exact:
            piv = next((i for i in range(r, nrows) if not field.is_zero(m[i][c])), None)
        else:
            piv = max(range(r, nrows), key=lambda i: abs(m[i][c]), default=None)
            if piv is not None and field.is_zero(m[piv][c]):
                piv = None
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(nrows):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def row_space_basis(field, rows):
    """Basis (rref rows) of the span of the given rows."""
    if not rows:
        return []
    red, pivots = rref(field, rows)
    return red[: len(pivots)]


def rank(field, rows) -> int:
    if not rows:
        return 0
    return len(rref(field, rows)[1])


def in_row_space(field, basis_rref, pivots, v):
    """Membership test against a precomputed rref basis."""
    v = v[:]
    for row, c in zip(basis_rref, pivots):
        if not field.is_zero(v[c]):
            f = v[c]
            v = [field.sub(x, field.mul(f, y)) for x, y in zip(v, row)]
    return all(field.is_zero(x) for x in v)


def nullspace(field: Field, rows, ncols=None):
    """Basis of {x : A x = 0} (column null space), one vector per free column."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols needed for an empty system")
        return [
            [field.one if j == i else field.zero for j in range(ncols)]
            for i in range(ncols)
        ]
    ncols = len(rows[0])
    red, pivots = rref(field, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * ncols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(red[r][fc])
        basis.append(v)
    return basis


def solve(field: Field, a, b):
    """One solution x of A x = b, or None if inconsistent."""
    n = len(a)
    ncols = len(a[0]) if a else 0
    aug = [a[i][:] + [b[i]] for i in range(n)]
    red, pivots = rref(field, aug)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def det(field: Field, a):
    """Determinant by fraction-free-ish elimination (exact over Q, F_p)."""
    n = len(a)
    m = [row[:] for row in a]
    acc = field.one
    sign = False
    for c in range(n):
        piv = next((i for i in range(c, n) if not field.is_zero(m[i][c])), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = not sign
        acc = field.mul(acc, m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if not field.is_zero(m[i][c]):
                f = field.mul(m[i][c], inv)
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return field.neg(acc) if sign else acc


def inverse(field: Field, a):
    n = len(a)
    aug = [a[i][:] + identity(field, n)[i] for i in range(n)]
    red, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise FieldError("matrix is not invertible")
    return [row[n:] for row in red[:n]]


def intersect_row_spaces(field, rows_a, rows_b):
    """Basis of span(rows_a) ∩ span(rows_b)."""
    if not rows_a or not rows_b:
        return []
    ka, kb = len(rows_a), len(rows_b)
    n = len(rows_a[0])
    # columns of the homogeneous system: x (ka) then y (kb); rows: n equations
    sys_rows = []
    for j in range(n):
        sys_rows.append([rows_a[i][j] for i in range(ka)] + [field.neg(rows_b[i][j]) for i in range(kb)])
    sols = nullspace(field, sys_rows)
    vecs = []
    for s in sols:
        v = [field.zero] * n
        for i in range(ka):
            if not field.is_zero(s[i]):
                v = [field.add(x, field.mul(s[i], y)) for x, y in zip(v, rows_a[i])]
        vecs.append(v)
    return row_space_basis(field, vecs)


def leading_principal_minors(field, a):
    return [det(field, [row[: k + 1] for row in a[: k + 1]]) for k in range(len(a))]


def is_positive_definite(field, a) -> bool:
    """Sylvester criterion; exact over Q, tolerance-aware over floats."""
    if not field.ordered:
        raise FieldError("positive definiteness needs an ordered field")
    for minor in leading_principal_minors(field, a):
        if field.exact:
            if minor <= 0:
                return False
        elif minor <= 1e-9:
            return False
    return True
