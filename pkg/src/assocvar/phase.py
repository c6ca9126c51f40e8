"""The formal derivation d, phase spaces k<x,dx>/(J,dJ), the universal
property for derivations, and functoriality on algebra maps.

``differentiate`` is a free-level operator: it sends a word to the sum of
its one-letter replacements x_i -> dx_i (Leibniz), working entirely in a
doubled alphabet.  The phase space of A quotients the doubled free algebra
by the original relations together with their derivatives; its points are
the tangent vectors of A's point variety.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraHom, FpAlgebra, check_hom, identity_hom
from .errors import ParseError
from .freealg import NcPoly, Presentation

DIFF_PREFIX = "d"


def doubled_gens(gens: tuple) -> tuple:
    """The phase alphabet: originals first, then their differentials (so
    deglex ranks differential letters above base letters of equal length)."""
    dnames = tuple(DIFF_PREFIX + g for g in gens)
    for dn in dnames:
        if dn in gens:
            raise ParseError(
                f"generator {dn!r} clashes with the reserved differential of "
                f"{dn[len(DIFF_PREFIX):]!r}"
            )
    return gens + dnames


def _lift(p: NcPoly, big_gens: tuple) -> NcPoly:
    """Reinterpret a base polynomial inside the doubled alphabet (base
    letters keep their indices)."""
    return NcPoly(p.field, big_gens, dict(p.terms))


def differentiate(p: NcPoly, big_gens: tuple | None = None) -> NcPoly:
    """Formal derivative: d(x_{i1}...x_{il}) = sum_j x_{i1}..dx_{ij}..x_{il},
    extended linearly; constants die."""
    gens = p.gens
    if big_gens is None:
        big_gens = doubled_gens(gens)
    n = len(gens)
    fld = p.field
    terms: dict = {}
    for w, c in p.terms.items():
        for j in range(len(w)):
            dw = w[:j] + (w[j] + n,) + w[j + 1 :]
            terms[dw] = fld.add(terms.get(dw, fld.zero), c)
    return NcPoly(fld, big_gens, terms)


@dataclass
class PhasePresentation:
    """k<x,dx>/(J,dJ) together with the base embedding x_i -> x_i."""

    base: FpAlgebra
    algebra: FpAlgebra
    embedding: AlgebraHom

    @property
    def pres(self) -> Presentation:
        return self.algebra.pres

    def d(self, p: NcPoly) -> NcPoly:
        """The universal derivation applied to a base element."""
        return differentiate(p, self.algebra.gens)

    def lift(self, p: NcPoly) -> NcPoly:
        return _lift(p, self.algebra.gens)


def phase_space(a: FpAlgebra) -> PhasePresentation:
    gens = doubled_gens(a.gens)
    rels = [_lift(r, gens) for r in a.rels]
    rels += [differentiate(r, gens) for r in a.rels]
    pres = Presentation(a.field, gens, tuple(rels), a.bound)
    ph = FpAlgebra(pres)
    embedding = AlgebraHom(
        a, ph, [NcPoly.gen(a.field, gens, i) for i in range(len(a.gens))]
    )
    return PhasePresentation(a, ph, embedding)


def tangent_chart(a: FpAlgebra) -> PhasePresentation:
    """Affine chart of the tangent variety: identical data to phase_space
    (its point set fibers over the base points by forgetting nothing more
    than the differential coordinates)."""
    return phase_space(a)


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------


@dataclass
class DerivationSpec:
    """delta(x_i) = images[i] in the target, with x acting through rho."""

    source: FpAlgebra
    target: FpAlgebra
    rho: AlgebraHom
    images: tuple

    def __post_init__(self):
        if self.rho.source.pres != self.source.pres or self.rho.target.pres != self.target.pres:
            raise ParseError("rho must map the derivation's source to its target")
        self.images = tuple(self.images)


def derivation_on(a: FpAlgebra, images) -> DerivationSpec:
    """Derivation of A into itself (rho = identity)."""
    return DerivationSpec(a, a, identity_hom(a), images)


def leibniz_extend(delta: DerivationSpec, p: NcPoly) -> NcPoly:
    """Value of the Leibniz extension on p: differentiate, then substitute
    x through rho and dx through the images."""
    dp = differentiate(p)
    rho_imgs = list(delta.rho.images)
    return _substitute_doubled(dp, rho_imgs, list(delta.images), delta.target)


def _substitute_doubled(dp: NcPoly, base_imgs, diff_imgs, target: FpAlgebra) -> NcPoly:
    from .freealg import substitute

    return substitute(dp, base_imgs + diff_imgs, target_gens=target.gens)


@dataclass(frozen=True)
class DerivationCheck:
    valid: bool
    witness: NcPoly | None = None


def check_derivation(delta: DerivationSpec) -> DerivationCheck:
    """Valid iff the Leibniz extension kills every source relation in the
    target quotient."""
    for r in delta.source.rels:
        if not delta.target.nf(leibniz_extend(delta, r)).is_zero:
            return DerivationCheck(False, witness=r)
    return DerivationCheck(True)


def induced_hom(delta: DerivationSpec, ph: PhasePresentation | None = None) -> AlgebraHom:
    """The unique algebra map Ph(source) -> target with x_i -> rho(x_i)
    and dx_i -> delta(x_i); composing with d recovers delta."""
    chk = check_derivation(delta)
    if not chk.valid:
        raise ParseError(
            f"not a derivation: Leibniz extension does not kill {chk.witness!r}"
        )
    ph = ph if ph is not None else phase_space(delta.source)
    images = list(delta.rho.images) + list(delta.images)
    return AlgebraHom(ph.algebra, delta.target, images)


def ph_functor(phi: AlgebraHom, ph_src: PhasePresentation | None = None,
               ph_tgt: PhasePresentation | None = None) -> AlgebraHom:
    """Ph(phi): x_i -> phi(x_i), dx_i -> d(phi(x_i))."""
    if not phi.valid:
        raise ParseError("cannot apply the phase functor to an invalid hom",)
    ph_src = ph_src if ph_src is not None else phase_space(phi.source)
    ph_tgt = ph_tgt if ph_tgt is not None else phase_space(phi.target)
    base_imgs = [ph_tgt.lift(im) for im in phi.images]
    diff_imgs = [ph_tgt.d(im) for im in phi.images]
    return AlgebraHom(ph_src.algebra, ph_tgt.algebra, base_imgs + diff_imgs)
