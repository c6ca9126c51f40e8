"""k-point sets of presented algebras, basic Zariski opens, induced maps,
and structure-sheaf section spaces over finite fields.

A point is a scalar assignment to the generators killing every relation;
scalars commute, so evaluating a word is a plain product.  Enumeration is
brute force over F_p^n behind a search-space guard; over Q points are
accepted and checked, never searched.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import linalg
from .algebra import AlgebraHom, FpAlgebra
from .errors import GuardExceeded, InvalidHom, ParseError
from .fields import PrimeField
from .freealg import NcPoly, Word, deglex_key

ENUM_GUARD = 10**8
RECIP_ENUM_GUARD = 10**5


@dataclass(frozen=True, order=True)
class Point:
    values: tuple

    def __len__(self):
        return len(self.values)


def eval_poly(f: NcPoly, point) -> object:
    """Unital evaluation at commuting scalar values."""
    values = point.values if isinstance(point, Point) else tuple(point)
    fld = f.field
    acc = fld.zero
    for w, c in f.terms.items():
        v = c
        for i in w:
            v = fld.mul(v, values[i])
        acc = fld.add(acc, v)
    return acc


def check_point(algebra: FpAlgebra, values) -> Point:
    """Validate and wrap a scalar assignment as a point of the algebra."""
    fld = algebra.field
    vals = tuple(fld.coerce(v) for v in values)
    if len(vals) != len(algebra.gens):
        raise ParseError(f"expected {len(algebra.gens)} coordinates, got {len(vals)}")
    p = Point(vals)
    for r in algebra.rels:
        if not fld.is_zero(eval_poly(r, p)):
            raise InvalidHom(f"relation {r!r} does not vanish at {vals}", witness=r)
    return p


class PointSet:
    """A finite, sorted, duplicate-free list of points of one algebra."""

    def __init__(self, algebra: FpAlgebra, points):
        self.algebra = algebra
        self.points = tuple(sorted(set(points)))

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p in self.points

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.algebra.pres == other.algebra.pres
            and self.points == other.points
        )

    def __repr__(self):
        return f"PointSet({len(self.points)} points)"


def _rel_exponents(algebra: FpAlgebra):
    """Relations as commutative (coeff, exponent-vector) term lists."""
    n = len(algebra.gens)
    out = []
    for r in algebra.rels:
        terms: dict = {}
        for w, c in r.terms.items():
            e = [0] * n
            for i in w:
                e[i] += 1
            e = tuple(e)
            terms[e] = algebra.field.add(terms.get(e, algebra.field.zero), c)
        out.append([(c, e) for e, c in terms.items() if not algebra.field.is_zero(c)])
    return out


def _eval_chunk(args):
    """Worker: scan a slice of F_p^n for common zeros (picklable)."""
    p, n, rels, first_coords = args
    found = []
    for head in first_coords:
        for tail in itertools.product(range(p), repeat=n - 1):
            vals = (head, *tail)
            ok = True
            for terms in rels:
                acc = 0
                for c, e in terms:
                    v = c
                    for i, ei in enumerate(e):
                        if ei:
                            v = v * pow(vals[i], ei, p) % p
                    acc = (acc + v) % p
                if acc:
                    ok = False
                    break
            if ok:
                found.append(vals)
    return found


def enumerate_points(algebra: FpAlgebra, jobs: int = 1) -> PointSet:
    """All F_p-points by exhaustive search (guarded at p^n <= 10^8)."""
    fld = algebra.field
    if not isinstance(fld, PrimeField):
        raise GuardExceeded(
            f"point enumeration needs a prime field, not {fld.name} "
            "(points over Q are user-supplied and checked, not searched)"
        )
    p, n = fld.p, len(algebra.gens)
    if p**n > ENUM_GUARD:
        raise GuardExceeded(f"search space {p}^{n} exceeds {ENUM_GUARD}")
    rels = _rel_exponents(algebra)
    if n == 0:
        pts = [] if _nonzero_consts(fld, rels) else [()]
        return PointSet(algebra, [Point(v) for v in pts])
    heads = list(range(p))
    if jobs > 1:
        chunks = [heads[i::jobs] for i in range(jobs)]
        args = [(p, n, rels, c) for c in chunks if c]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_eval_chunk, args))
        found = [v for part in results for v in part]
    else:
        found = _eval_chunk((p, n, rels, heads))
    return PointSet(algebra, [Point(v) for v in found])


def _nonzero_consts(fld, rels) -> bool:
    """True when some relation has a nonzero constant evaluation (no gens)."""
    for terms in rels:
        acc = fld.zero
        for c, _ in terms:
            acc = fld.add(acc, c)
        if not fld.is_zero(acc):
            return True
    return False


def basic_open(f: NcPoly, x: PointSet) -> PointSet:
    """D(f): the points where f evaluates to a nonzero scalar."""
    fld = x.algebra.field
    return PointSet(
        x.algebra, [p for p in x if not fld.is_zero(eval_poly(f, p))]
    )


def induced_point_map(h: AlgebraHom, x: PointSet) -> PointSet:
    """Pull points of the target algebra back along h: B -> A.

    Each point p of A goes to p o h, i.e. the tuple of image evaluations.
    """
    if x.algebra.pres != h.target.pres:
        raise InvalidHom("point set does not live on the hom's target")
    if not h.valid:
        raise InvalidHom("hom is not valid", witness=h.check.witness)
    out = []
    for p in x:
        out.append(Point(tuple(eval_poly(im, p) for im in h.images)))
    return PointSet(h.source, out)


# ---------------------------------------------------------------------------
# Section spaces over finite fields
# ---------------------------------------------------------------------------


@dataclass
class SectionSpace:
    """Function space on a finite open set: the span of all monomial value
    tables, closed under pointwise products and reciprocals of
    nowhere-zero members."""

    open_set: PointSet
    basis: list  # rref'd value tables, each a tuple over the open set
    contains_unit_inverses: bool


def _table_product(fld, s, t):
    return tuple(fld.mul(a, b) for a, b in zip(s, t))


def section_space(u: PointSet) -> SectionSpace:
    fld = u.algebra.field
    if not isinstance(fld, PrimeField):
        raise GuardExceeded("section spaces are computed over prime fields only")
    if len(u) == 0:
        raise ParseError("empty open set has no section space")
    n = len(u.algebra.gens)
    bound = u.algebra.bound
    gen_tables = [
        tuple(p.values[i] for p in u) for i in range(n)
    ]
    ones = tuple(fld.one for _ in range(len(u)))
    # span of all monomial tables of degree <= bound: exponent vectors suffice
    tables = []
    for exps in itertools.product(range(bound + 1), repeat=n):
        if sum(exps) > bound:
            continue
        t = ones
        for i, e in enumerate(exps):
            for _ in range(e):
                t = _table_product(fld, t, gen_tables[i])
        tables.append(list(t))
    basis = linalg.row_space_basis(fld, tables)
    saw_all_inverses = True
    while True:
        dim = len(basis)
        new = [list(b) for b in basis]
        for s in basis:
            for t in basis:
                new.append(list(_table_product(fld, s, t)))
        # reciprocals of nowhere-zero span members (full enumeration, guarded)
        if fld.p**dim <= RECIP_ENUM_GUARD:
            for combo in itertools.product(range(fld.p), repeat=dim):
                v = [fld.zero] * len(u)
                for c, b in zip(combo, basis):
                    if c:
                        v = [fld.add(x, fld.mul(c, y)) for x, y in zip(v, b)]
                if all(not fld.is_zero(x) for x in v):
                    new.append([fld.inv(x) for x in v])
        else:
            saw_all_inverses = False
            for b in basis:
                if all(not fld.is_zero(x) for x in b):
                    new.append([fld.inv(x) for x in b])
        basis = linalg.row_space_basis(fld, new)
        if len(basis) == dim:
            break
    return SectionSpace(u, [tuple(b) for b in basis], saw_all_inverses)


def kernel_of_rho(u: PointSet, degree: int):
    """Basis of {f : deg f <= degree, f vanishes on every point of u}.

    The kernel of evaluation on words — nontrivial over finite fields
    (e.g. x^p - x), which is why it is exposed instead of an injectivity
    claim.
    """
    algebra = u.algebra
    fld = algebra.field
    n = len(algebra.gens)
    words = [()]
    frontier = [()]
    for _ in range(degree):
        frontier = [w + (i,) for w in frontier for i in range(n)]
        words.extend(frontier)
    words.sort(key=deglex_key)
    rows = []
    for p in u:
        row = []
        for w in words:
            v = fld.one
            for i in w:
                v = fld.mul(v, p.values[i])
            row.append(v)
        rows.append(row)
    coeffs = linalg.nullspace(fld, rows, ncols=len(words))
    out = []
    for vec in coeffs:
        terms = {w: c for w, c in zip(words, vec) if not fld.is_zero(c)}
        out.append(NcPoly(fld, algebra.gens, terms))
    return out
