"""Two-sided differential tensor squares, the Euclidean 2-tensor, pointwise
tangent spaces and Gram matrices, bundle charts and sections.

The tensor square of an algebra doubles the differential letters: the
first copy keeps the ``d`` prefix, the second copy uses the ``e`` prefix
(printed literally, so presentations round-trip).  Evaluating the tensor
at a point treats the differential letters as commuting scalar slots: a
bilinear element becomes a bilinear form on the tangent space, and the
Euclidean element sum_i dx_i * ex_i becomes the standard dot product.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebra import AlgebraHom, FpAlgebra, abelianization, compose_hom, tensor_over_k
from .errors import AmbientMismatch, InvalidHom, ParseError
from .fields import Field, PrimeField
from .freealg import NcPoly, Presentation
from .phase import differentiate, doubled_gens
from .points import Point, check_point, enumerate_points

SECOND_DIFF_PREFIX = "e"


@dataclass
class TensorSquarePresentation:
    """Generators x..., dx..., ex...; relations J, dJ and its e-copy."""

    base: FpAlgebra
    algebra: FpAlgebra

    @property
    def pres(self) -> Presentation:
        return self.algebra.pres

    @property
    def n(self) -> int:
        return len(self.base.gens)


def tensor_square(a: FpAlgebra) -> TensorSquarePresentation:
    n = len(a.gens)
    enames = tuple(SECOND_DIFF_PREFIX + g for g in a.gens)
    gens = doubled_gens(a.gens) + enames
    for en in enames:
        if en in a.gens or en in doubled_gens(a.gens)[:n]:
            raise ParseError(f"generator {en!r} clashes with a second-factor name")
    rels = [NcPoly(a.field, gens, dict(r.terms)) for r in a.rels]
    for r in a.rels:
        dr = differentiate(r, gens)  # letters n..2n-1
        rels.append(dr)
        er = dr.map_words(lambda w: tuple(i + n if n <= i < 2 * n else i for i in w))
        rels.append(er)
    pres = Presentation(a.field, gens, tuple(p for p in rels if not p.is_zero), a.bound)
    return TensorSquarePresentation(a, FpAlgebra(pres))


@dataclass
class MetricTensor:
    """An element of the tensor square, bilinear in the differential
    letters: every word holds exactly one d-letter and one e-letter."""

    ambient: TensorSquarePresentation
    g_of_t: NcPoly

    def is_bilinear(self) -> bool:
        n = self.ambient.n
        for w in self.g_of_t.terms:
            d_count = sum(1 for i in w if n <= i < 2 * n)
            e_count = sum(1 for i in w if i >= 2 * n)
            if d_count != 1 or e_count != 1:
                return False
        return True


def euclidean_metric(a: FpAlgebra) -> MetricTensor:
    """g(t) = sum_i dx_i * ex_i in the tensor square."""
    ts = tensor_square(a)
    n = len(a.gens)
    fld = a.field
    g = NcPoly.zero(fld, ts.pres.gens)
    for i in range(n):
        g = g + NcPoly.monomial(fld, ts.pres.gens, (n + i, 2 * n + i))
    return MetricTensor(ts, g)


# ---------------------------------------------------------------------------
# Tangent spaces and Gram matrices
# ---------------------------------------------------------------------------


@dataclass
class TangentSpaceAtPoint:
    algebra: FpAlgebra
    point: Point
    basis: list  # rows: solutions of the linearized relations
    matrix: list  # the linearization rows (one per relation)

    @property
    def dim(self) -> int:
        return len(self.basis)


def linearize_at(r: NcPoly, point: Point, n: int, fld: Field):
    """Row of dx-coefficients of differentiate(r) with x evaluated at the
    point and the differential letters commuting."""
    row = [fld.zero] * n
    dr = differentiate(r)
    for w, c in dr.terms.items():
        coeff = c
        slot = None
        for i in w:
            if i >= n:
                slot = i - n
            else:
                coeff = fld.mul(coeff, point.values[i])
        row[slot] = fld.add(row[slot], coeff)
    return row


def tangent_space_at(a: FpAlgebra, point: Point | tuple) -> TangentSpaceAtPoint:
    p = point if isinstance(point, Point) else check_point(a, point)
    fld = a.field
    n = len(a.gens)
    rows = [linearize_at(r, p, n, fld) for r in a.rels]
    basis = linalg.nullspace(fld, rows, ncols=n) if rows else linalg.nullspace(fld, [], ncols=n)
    return TangentSpaceAtPoint(a, p, basis, rows)


@dataclass
class InnerProductMatrix:
    gram: list
    field: Field
    positive_definite: bool | None  # None when the field is unordered

    @property
    def symmetric(self) -> bool:
        fld = self.field
        k = len(self.gram)
        return all(
            fld.is_zero(fld.sub(self.gram[i][j], self.gram[j][i]))
            for i in range(k)
            for j in range(i)
        )


def metric_at(g: MetricTensor, t: TangentSpaceAtPoint) -> InnerProductMatrix:
    """Gram matrix of g on the tangent basis: entry (a,b) evaluates g with
    dx := row a, ex := row b, x := the point."""
    if t.algebra.pres != g.ambient.base.pres:
        raise AmbientMismatch("tangent space is not over the metric's base")
    fld = t.algebra.field
    n = g.ambient.n
    k = t.dim
    gram = linalg.zeros(fld, k, k)
    for a in range(k):
        for b in range(k):
            u, v = t.basis[a], t.basis[b]
            acc = fld.zero
            for w, c in g.g_of_t.terms.items():
                val = c
                for i in w:
                    if i >= 2 * n:
                        val = fld.mul(val, v[i - 2 * n])
                    elif i >= n:
                        val = fld.mul(val, u[i - n])
                    else:
                        val = fld.mul(val, t.point.values[i])
                acc = fld.add(acc, val)
            gram[a][b] = acc
    pd = None
    if fld.ordered:
        sym = all(
            fld.is_zero(fld.sub(gram[i][j], gram[j][i]))
            for i in range(k)
            for j in range(i)
        )
        pd = sym and linalg.is_positive_definite(fld, gram)
    return InnerProductMatrix(gram, fld, pd)


@dataclass
class RiemannianCheck:
    ok: bool
    witness: Point | None = None
    vacuous: bool = False


def is_riemannian(g: MetricTensor, sample) -> RiemannianCheck:
    """Symmetric positive-definite Gram at every sample point."""
    base = g.ambient.base
    if not base.field.ordered:
        raise ParseError("Riemannian verification needs an ordered field")
    sample = list(sample)
    if not sample:
        return RiemannianCheck(True, vacuous=True)
    for p in sample:
        pt = p if isinstance(p, Point) else check_point(base, p)
        t = tangent_space_at(base, pt)
        ipm = metric_at(g, t)
        if t.dim and (not ipm.symmetric or not ipm.positive_definite):
            return RiemannianCheck(False, witness=pt)
    return RiemannianCheck(True)


# ---------------------------------------------------------------------------
# 2-tensor fields as pointwise-commuting diagrams
# ---------------------------------------------------------------------------


@dataclass
class TensorFieldCheck:
    commutes: bool
    witness: object = None


def tensor_field_source(a: FpAlgebra, t_name: str = "t") -> FpAlgebra:
    """A (x) k[t]: the polynomial parameter line tensored onto the base."""
    line = FpAlgebra(Presentation(a.field, (t_name,), (), a.bound))
    return tensor_over_k(a, line)


def euclidean_tensor_field(g: MetricTensor) -> AlgebraHom:
    """The canonical field: base generators map identically, t maps to g."""
    a = g.ambient.base
    src = tensor_field_source(a)
    ts_gens = g.ambient.pres.gens
    images = [NcPoly.gen(a.field, ts_gens, i) for i in range(len(a.gens))]
    images.append(g.g_of_t)
    return AlgebraHom(src, g.ambient.algebra, images)


def _eval_base_letters(p: NcPoly, point: Point, n: int):
    """Evaluate letters < n at the point, keeping higher letters symbolic
    (scalars commute, so they pull out front)."""
    fld = p.field
    terms: dict = {}
    for w, c in p.terms.items():
        coeff = c
        rest = []
        for i in w:
            if i < n:
                coeff = fld.mul(coeff, point.values[i])
            else:
                rest.append(i)
        key = tuple(rest)
        terms[key] = fld.add(terms.get(key, fld.zero), coeff)
    return {k: v for k, v in terms.items() if not fld.is_zero(v)}


def check_tensor_field(h: AlgebraHom, sample) -> TensorFieldCheck:
    """Pointwise commutativity of the tensor-field diagram.

    The source must be base (x) k[t] with t last; the target a tensor
    square of the same base.  At every sample point the base generators
    must evaluate through h to their own point values (no differential
    letters surviving), and h(t) must be bilinear in the differential
    letters so it induces a bilinear form on each tangent fiber.
    """
    n_src = len(h.source.gens) - 1
    n = n_src
    base_gens = h.source.gens[:n]
    if len(h.target.gens) != 3 * n or h.target.gens[:n] != base_gens:
        raise InvalidHom("target is not the tensor square of the source's base")
    fld = h.source.field
    t_img = h.target.nf(h.images[n])
    for w in t_img.terms:
        d_count = sum(1 for i in w if n <= i < 2 * n)
        e_count = sum(1 for i in w if i >= 2 * n)
        if d_count != 1 or e_count != 1:
            return TensorFieldCheck(False, witness=("t-image not bilinear", t_img))
    for p in sample:
        pt = p if isinstance(p, Point) else Point(tuple(fld.coerce(v) for v in p))
        for i in range(n):
            img = h.target.nf(h.images[i])
            evaluated = _eval_base_letters(img, pt, n)
            expect = {(): pt.values[i]} if not fld.is_zero(pt.values[i]) else {}
            if evaluated != expect:
                return TensorFieldCheck(
                    False, witness=(pt, h.source.gens[i])
                )
    return TensorFieldCheck(True)


# ---------------------------------------------------------------------------
# Bundle charts, fibers, sections
# ---------------------------------------------------------------------------


@dataclass
class BundleChart:
    """An affine chart of a rank-k bundle: base (x) k<fiber gens> cut by
    the listed relations, with the structure map from the base."""

    base: FpAlgebra
    fiber_gens: tuple
    rank: int
    extra_rels: tuple  # over the total alphabet
    total: FpAlgebra
    structure: AlgebraHom


def bundle_chart(base: FpAlgebra, fiber_names, rank: int, rel_texts_or_polys) -> BundleChart:
    fld = base.field
    fiber_names = tuple(fiber_names)
    for name in fiber_names:
        if name in base.gens:
            raise ParseError(f"fiber generator {name!r} clashes with a base name")
    gens = base.gens + fiber_names
    n = len(base.gens)
    rels = [NcPoly(fld, gens, dict(r.terms)) for r in base.rels]
    for i in range(n):
        for j in range(n, len(gens)):
            xi, uj = NcPoly.gen(fld, gens, i), NcPoly.gen(fld, gens, j)
            rels.append(xi * uj - uj * xi)
    proto = Presentation(fld, gens, (), base.bound)
    extra = []
    for item in rel_texts_or_polys:
        p = proto.poly(item) if isinstance(item, str) else item
        if not p.is_zero:
            extra.append(p)
    total = FpAlgebra(
        Presentation(fld, gens, tuple(rels + extra), max(base.bound, 2))
    )
    structure = AlgebraHom(
        base, total, [NcPoly.gen(fld, gens, i) for i in range(n)]
    )
    return BundleChart(base, fiber_names, rank, tuple(extra), total, structure)


def bundle_fiber_at(e: BundleChart, point: Point | tuple) -> Presentation:
    """The fiber presentation over a base point: base letters evaluated,
    fiber letters reindexed into their own alphabet."""
    pt = point if isinstance(point, Point) else check_point(e.base, point)
    fld = e.base.field
    n = len(e.base.gens)
    rels = []
    for r in e.extra_rels:
        terms: dict = {}
        for w, c in r.terms.items():
            coeff = c
            rest = []
            for i in w:
                if i < n:
                    coeff = fld.mul(coeff, pt.values[i])
                else:
                    rest.append(i - n)
            key = tuple(rest)
            terms[key] = fld.add(terms.get(key, fld.zero), coeff)
        p = NcPoly(fld, e.fiber_gens, terms)
        if not p.is_zero:
            rels.append(p)
    return Presentation(fld, e.fiber_gens, tuple(rels), e.total.bound)


@dataclass
class RankCheck:
    ok: bool
    witness: object = None


def _is_commutator_rule(rule) -> bool:
    if len(rule.lead) != 2 or len(rule.rest.terms) != 1:
        return False
    (w, c), = rule.rest.terms.items()
    fld = rule.rest.field
    return (
        len(w) == 2
        and w == (rule.lead[1], rule.lead[0])
        and rule.lead[0] > rule.lead[1]
        and fld.is_zero(fld.sub(c, fld.one))
    )


def check_bundle_rank(e: BundleChart, sample, k: int) -> RankCheck:
    """Fibers over every sample point look like affine k-space: p^k points
    over F_p, and the abelianized fiber ideal completes to rules with
    degree <= 1 leads (beyond pure commutators)."""
    fld = e.base.field
    for p in sample:
        pt = p if isinstance(p, Point) else check_point(e.base, p)
        fiber = bundle_fiber_at(e, pt)
        fiber_alg = FpAlgebra(fiber)
        ab = abelianization(fiber_alg)
        for rule in ab.rw.rules:
            if len(rule.lead) > 1 and not _is_commutator_rule(rule):
                return RankCheck(False, witness=rule.as_poly())
        if isinstance(fld, PrimeField):
            npts = len(enumerate_points(fiber_alg))
            if npts != fld.p**k:
                return RankCheck(False, witness=(pt, npts))
    return RankCheck(True)


def parse_bundle_file(text: str) -> BundleChart:
    """A presentation file extended with ``fiber <names>``, ``rank <k>``
    and ``frel <poly>`` statements (the latter over base + fiber names)."""
    from .freealg import parse_presentation

    pres_stmts = []
    fiber_names: tuple = ()
    rank = None
    frel_texts = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0]
        for part in stripped.split(";"):
            part = part.strip()
            if not part:
                continue
            head, _, rest = part.partition(" ")
            if head == "fiber":
                fiber_names = tuple(rest.split())
            elif head == "rank":
                rank = int(rest)
            elif head == "frel":
                frel_texts.append(rest)
            else:
                pres_stmts.append(part)
    if not fiber_names:
        raise ParseError("missing 'fiber' statement in bundle file")
    if rank is None:
        rank = len(fiber_names)
    base = FpAlgebra(parse_presentation("\n".join(pres_stmts)))
    return bundle_chart(base, fiber_names, rank, frel_texts)


def check_section(s: AlgebraHom, f: AlgebraHom) -> bool:
    """s is a section of the chart with structure map f: s o f = id."""
    if not s.valid or not f.valid:
        raise InvalidHom("section check needs valid homs")
    comp = compose_hom(s, f)
    a = f.source
    for i in range(len(a.gens)):
        if not a.equal(comp.images[i], a.gen_poly(i)):
            return False
    return True
