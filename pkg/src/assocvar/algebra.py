"""Finitely presented algebras, homomorphisms, tensor products over k,
abelianization, and the degree-1 hom <-> matrix correspondence.

An ``FpAlgebra`` owns a presentation together with its completed rewrite
system, so coset equality is a normal-form comparison.  Homomorphisms are
generator-image lists; validity means every source relation dies in the
target quotient (up to the target bound — the semidecision caveat is kept
on the result, never silently dropped).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import AmbientMismatch, InvalidHom
from .fields import Field
from .freealg import NcPoly, Presentation, parse_poly, substitute
from .rewrite import RewriteSystem, complete, _reduce


class FpAlgebra:
    """A presentation plus its cached completion."""

    def __init__(self, pres: Presentation):
        self.pres = pres
        self.rw: RewriteSystem = complete(pres)

    @property
    def field(self) -> Field:
        return self.pres.field

    @property
    def gens(self) -> tuple:
        return self.pres.gens

    @property
    def bound(self) -> int:
        return self.pres.bound

    @property
    def rels(self) -> tuple:
        return self.pres.rels

    def nf(self, p: NcPoly) -> NcPoly:
        """Normal form; accepts any degree (soundness does not need the
        bound, only canonicity claims do)."""
        return _reduce(p, self.rw.rules)

    def equal(self, p: NcPoly, q: NcPoly) -> bool:
        return self.nf(p - q).is_zero

    @property
    def is_zero_ring(self) -> bool:
        return self.nf(self.pres.one()).is_zero

    def poly(self, text: str) -> NcPoly:
        return parse_poly(text, self.pres)

    def gen_poly(self, i: int) -> NcPoly:
        return self.pres.gen_poly(i)

    def one(self) -> NcPoly:
        return self.pres.one()

    def __eq__(self, other):
        return isinstance(other, FpAlgebra) and self.pres == other.pres

    def __hash__(self):
        return hash(self.pres)

    def __repr__(self):
        names = ",".join(self.gens)
        return f"FpAlgebra({self.field}<{names}>, {len(self.rels)} rels)"


@dataclass(frozen=True)
class HomCheck:
    valid: bool
    witness: NcPoly | None = None  # a source relation that fails to vanish
    caveat: bool = False  # completion below bound, or image degree above it


class AlgebraHom:
    """images[i] is the target value of the i-th source generator."""

    def __init__(self, source: FpAlgebra, target: FpAlgebra, images):
        if len(images) != len(source.gens):
            raise AmbientMismatch(
                f"{len(source.gens)} generators but {len(images)} images"
            )
        for im in images:
            if im.field != target.field or im.gens != target.gens:
                raise AmbientMismatch("image not in the target ambient")
        if source.field != target.field:
            raise AmbientMismatch("source and target fields differ")
        self.source = source
        self.target = target
        self.images = tuple(images)
        self._check: HomCheck | None = None

    def apply(self, p: NcPoly) -> NcPoly:
        """Image of a source element (not normalized)."""
        return substitute(p, list(self.images), target_gens=self.target.gens)

    @property
    def check(self) -> HomCheck:
        if self._check is None:
            self._check = check_hom(self)
        return self._check

    @property
    def valid(self) -> bool:
        return self.check.valid

    def __repr__(self):
        arrows = ", ".join(
            f"{g} -> {im!r}" for g, im in zip(self.source.gens, self.images)
        )
        return f"AlgebraHom({arrows})"


def identity_hom(a: FpAlgebra) -> AlgebraHom:
    return AlgebraHom(a, a, [a.gen_poly(i) for i in range(len(a.gens))])


def check_hom(h: AlgebraHom) -> HomCheck:
    """Valid iff every source relation maps to normal form 0 in the target."""
    caveat = not h.target.rw.is_complete
    for r in h.source.rels:
        img = h.apply(r)
        if img.degree > h.target.bound:
            caveat = True
        if not h.target.nf(img).is_zero:
            return HomCheck(False, witness=r, caveat=caveat)
    return HomCheck(True, caveat=caveat)


def compose_hom(g: AlgebraHom, h: AlgebraHom) -> AlgebraHom:
    """g after h (h: A->B, g: B->C)."""
    if h.target.pres != g.source.pres:
        raise AmbientMismatch("middle algebras do not match")
    images = [g.apply(im) for im in h.images]
    return AlgebraHom(h.source, g.target, images)


# ---------------------------------------------------------------------------
# Tensor products and abelianization
# ---------------------------------------------------------------------------


def _rename_on_clash(left: tuple, right: tuple):
    """Deterministic renaming of the right factor's clashing names."""
    taken = set(left)
    out = []
    for name in right:
        new = name
        k = 2
        while new in taken:
            new = f"{name}_{k}"
            k += 1
        taken.add(new)
        out.append(new)
    return tuple(out)


def _relift(p: NcPoly, gens: tuple, offset: int) -> NcPoly:
    """Reinterpret p's words inside a larger generator list."""
    return NcPoly(
        p.field, gens, {tuple(i + offset for i in w): c for w, c in p.terms.items()}
    )


def tensor_over_k(a: FpAlgebra, b: FpAlgebra) -> FpAlgebra:
    """A (x)_k B: disjoint generators, both relation lists, and cross
    commutators making the two factors commute with each other."""
    if a.field != b.field:
        raise AmbientMismatch(f"field mismatch: {a.field} vs {b.field}")
    fld = a.field
    bnames = _rename_on_clash(a.gens, b.gens)
    gens = a.gens + bnames
    na = len(a.gens)
    rels = [_relift(r, gens, 0) for r in a.rels]
    rels += [_relift(r, gens, na) for r in b.rels]
    for i in range(na):
        for j in range(na, len(gens)):
            xi = NcPoly.gen(fld, gens, i)
            yj = NcPoly.gen(fld, gens, j)
            rels.append(xi * yj - yj * xi)
    bound = max(a.bound, b.bound, 2 if rels else 1)
    return FpAlgebra(Presentation(fld, gens, tuple(rels), bound))


def abelianization(a: FpAlgebra) -> FpAlgebra:
    """Add all pairwise generator commutators."""
    fld = a.field
    gens = a.gens
    rels = list(a.rels)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            xi, xj = NcPoly.gen(fld, gens, i), NcPoly.gen(fld, gens, j)
            c = xi * xj - xj * xi
            if c not in rels:
                rels.append(c)
    bound = max(a.bound, 2 if rels else 1)
    return FpAlgebra(Presentation(fld, gens, tuple(rels), bound))


def is_fully_commutative(a: FpAlgebra) -> bool:
    """All pairwise generator commutators vanish in the quotient."""
    fld, gens = a.field, a.gens
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            xi, xj = NcPoly.gen(fld, gens, i), NcPoly.gen(fld, gens, j)
            if not a.nf(xi * xj - xj * xi).is_zero:
                return False
    return True


# ---------------------------------------------------------------------------
# Degree-1 homs <-> matrices
# ---------------------------------------------------------------------------


def linear_part(f: AlgebraHom):
    """Matrix of a homogeneous-degree-1 endomorphism: column j holds the
    generator coefficients of the image of generator j."""
    n = len(f.source.gens)
    if len(f.target.gens) != n:
        raise InvalidHom("linear part needs equally many generators")
    fld = f.source.field
    m = linalg.zeros(fld, n, n)
    for j, im in enumerate(f.images):
        for w, c in im.terms.items():
            if len(w) != 1:
                raise InvalidHom(
                    f"image of {f.source.gens[j]} is not homogeneous of degree 1",
                    witness=im,
                )
            m[w[0]][j] = c
    return m


def hom_of_matrix(mat, a: FpAlgebra) -> AlgebraHom:
    """Endomorphism sending generator j to sum_i mat[i][j] * x_i.

    Meaningful (automatically valid) on free and fully commutative
    algebras; validity is re-derived, not assumed.
    """
    fld = a.field
    n = len(a.gens)
    images = []
    for j in range(n):
        p = NcPoly.zero(fld, a.gens)
        for i in range(n):
            p = p + NcPoly.gen(fld, a.gens, i).scale(mat[i][j])
        images.append(p)
    return AlgebraHom(a, a, images)


def is_invertible_linear(f: AlgebraHom) -> bool:
    fld = f.source.field
    return not fld.is_zero(linalg.det(fld, linear_part(f)))
