"""Degree-truncated two-sided completion and normal forms.

Relations are oriented into rewrite rules ``lead -> rest`` with the lead
the deglex-largest word.  Completion resolves every overlap ambiguity
whose ambiguity word fits under the degree bound; the result reports
``complete_up_to``, the degree up to which normal forms are canonical.
Equality in the quotient is thus decidable up to the bound (and the bound
is always reported alongside results — quotient equality is in general
only semidecidable).

Reduction can only shrink words in deglex, so normal forms terminate and
never overflow the bound.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from enum import Enum

from .errors import TruncationError
from .freealg import NcPoly, Presentation, Word, deglex_key

MAX_RULES = 20_000
MAX_PASSES = 200_000


@dataclass(frozen=True)
class RewriteRule:
    """Oriented relation lead - rest in the ideal, rest deglex below lead."""

    lead: Word
    rest: NcPoly

    def as_poly(self) -> NcPoly:
        fld = self.rest.field
        return NcPoly.monomial(fld, self.rest.gens, self.lead) - self.rest


class RewriteSystem:
    """An inter-reduced rule list with a completeness certificate.

    ``complete_up_to`` is the largest degree d <= bound such that every
    overlap ambiguity of degree <= d reduces to zero.  Normal forms of
    polynomials of degree <= complete_up_to are canonical coset
    representatives.
    """

    def __init__(self, pres: Presentation, rules, complete_up_to: int):
        self.pres = pres
        self.rules = tuple(sorted(rules, key=lambda r: deglex_key(r.lead)))
        self.bound = pres.bound
        self.complete_up_to = complete_up_to

    @property
    def is_complete(self) -> bool:
        return self.complete_up_to >= self.bound

    def __repr__(self):
        return (
            f"RewriteSystem({len(self.rules)} rules, "
            f"complete_up_to={self.complete_up_to}/{self.bound})"
        )


def _find_subword(word: Word, lead: Word) -> int:
    """Leftmost index where ``lead`` occurs in ``word``, or -1."""
    n, k = len(word), len(lead)
    if k == 0:
        return 0
    for i in range(n - k + 1):
        if word[i : i + k] == lead:
            return i
    return -1


def _reduce(p: NcPoly, rules) -> NcPoly:
    """Rewrite until no word contains any rule's lead.  Terminating: each
    step replaces a word by deglex-strictly-smaller words."""
    fld = p.field
    gens = p.gens
    while True:
        hit = None
        for w in sorted(p.terms, key=deglex_key, reverse=True):
            for rule in rules:
                i = _find_subword(w, rule.lead)
                if i >= 0:
                    hit = (w, rule, i)
                    break
            if hit:
                break
        if hit is None:
            return p
        w, rule, i = hit
        c = p.terms[w]
        left, right = w[:i], w[i + len(rule.lead) :]
        # p  -=  c * left*(lead - rest)*right
        repl = NcPoly.monomial(fld, gens, left) * rule.rest * NcPoly.monomial(fld, gens, right)
        delta = dict(repl.scale(c).terms)
        delta[w] = fld.add(delta.get(w, fld.zero), fld.neg(c))
        q = dict(p.terms)
        for ww, cc in delta.items():
            q[ww] = fld.add(q.get(ww, fld.zero), cc)
        p = NcPoly(fld, gens, q)


def _orient(p: NcPoly) -> RewriteRule:
    p = p.monic()
    lw = p.lead_word()
    rest = NcPoly(p.field, p.gens, {w: p.field.neg(c) for w, c in p.terms.items() if w != lw})
    return RewriteRule(lw, rest)


def _proper_overlaps(l1: Word, l2: Word):
    """Yield overlap widths k where a proper suffix of l1 equals a proper
    prefix of l2 (containments are excluded by inter-reduction)."""
    for k in range(1, min(len(l1), len(l2))):
        if l1[len(l1) - k :] == l2[:k]:
            yield k


def complete(pres: Presentation) -> RewriteSystem:
    """Truncated two-sided completion of the presentation's relations.

    Deterministic for fixed input: pending polynomials are processed in
    ascending (degree, word) order of their lead at insertion time.
    """
    fld = pres.field
    gens = pres.gens
    bound = pres.bound
    counter = itertools.count()
    queue: list = []

    def push(p: NcPoly):
        if p.is_zero:
            return
        heapq.heappush(queue, (deglex_key(p.lead_word()), next(counter), p))

    for r in pres.rels:
        if not r.is_zero:
            push(r)

    rules: list = []
    skipped: list = []
    passes = 0
    while queue:
        passes += 1
        if passes > MAX_PASSES or len(rules) > MAX_RULES:
            # Out of budget: return a flagged system.  Everything below the
            # smallest pending lead degree is already resolved.
            pending = min(q[0][0] for q in queue)
            return RewriteSystem(pres, rules, min(max(0, pending - 1), bound))
        _, _, p = heapq.heappop(queue)
        p = _reduce(p, rules)
        if p.is_zero:
            continue
        new = _orient(p)
        # drop rules whose lead contains the new lead; requeue their content
        kept = []
        for rule in rules:
            if _find_subword(rule.lead, new.lead) >= 0:
                push(rule.as_poly())
            else:
                kept.append(rule)
        rules = kept
        # keep rests fully reduced w.r.t. the enlarged system
        rules = [
            RewriteRule(r.lead, _reduce(r.rest, kept + [new])) for r in kept
        ]
        rules.append(new)
        for rule in rules:
            for a, b in ((new, rule), (rule, new)):
                for k in _proper_overlaps(a.lead, b.lead):
                    amb_deg = len(a.lead) + len(b.lead) - k
                    if amb_deg > bound:
                        skipped.append(amb_deg)
                        continue
                    right = NcPoly.monomial(fld, gens, b.lead[k:])
                    left = NcPoly.monomial(fld, gens, a.lead[: len(a.lead) - k])
                    push(a.rest * right - left * b.rest)

    # Skipped ambiguities all have degree > bound; they cannot appear inside
    # a word of degree <= bound, so the system is complete up to the bound.
    complete_up_to = bound if not skipped else min(bound, min(skipped) - 1)
    return RewriteSystem(pres, rules, complete_up_to)


def normal_form(p: NcPoly, system: RewriteSystem) -> NcPoly:
    """Canonical representative of p's coset (up to the completeness
    degree); idempotent and k-linear."""
    if p.degree > system.bound:
        raise TruncationError(
            f"degree {p.degree} exceeds the bound {system.bound}", witness=p
        )
    return _reduce(p, system.rules)


class Membership(Enum):
    YES = "yes"
    NO_UP_TO_BOUND = "no-up-to-bound"


@dataclass(frozen=True)
class MemberResult:
    status: Membership
    normal_form: NcPoly
    complete_up_to: int
    bound: int

    @property
    def caveat(self) -> bool:
        """True when the NO answer could still flip above the bound."""
        return self.complete_up_to < self.bound

    def __bool__(self):
        return self.status is Membership.YES


def ideal_member(p: NcPoly, pres: Presentation, system: RewriteSystem | None = None) -> MemberResult:
    """Semidecision of two-sided ideal membership up to the bound."""
    system = system if system is not None else complete(pres)
    nf = normal_form(p, system)
    status = Membership.YES if nf.is_zero else Membership.NO_UP_TO_BOUND
    return MemberResult(status, nf, system.complete_up_to, system.bound)
