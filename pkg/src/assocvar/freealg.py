"""Exact arithmetic in free associative algebras k<x_1,...,x_n>.

Monomials are *words*: tuples of generator indices, the empty tuple being
the multiplicative unit.  A polynomial is a finite map from words to
nonzero coefficients, kept in canonical form (no zero coefficient is ever
stored), so structural equality is semantic equality.

The module also owns the presentation file format::

    field F5
    gens x y
    rel x*x + y*y - 1
    bound 8

Statements are separated by newlines or semicolons; ``#`` starts a
comment.  Monomial comparisons everywhere use degree-lexicographic order
with the generator order of the file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .errors import AmbientMismatch, ParseError
from .fields import Field, parse_field

Word = tuple  # tuple[int, ...]

DEFAULT_BOUND = 8

NEG_INF = float("-inf")  # degree of the zero polynomial


def deglex_key(w: Word):
    """Sort key realizing degree-lexicographic order (longer words first,
    ties broken by the index sequence)."""
    return (len(w), w)


class NcPoly:
    """A noncommutative polynomial over a fixed field and generator list.

    Instances are immutable in practice: no method mutates ``terms`` after
    construction, so values can be shared freely across threads.
    """

    __slots__ = ("field", "gens", "terms")

    def __init__(self, field: Field, gens: tuple, terms: dict | None = None):
        self.field = field
        self.gens = gens
        if terms:
            self.terms = {w: c for w, c in terms.items() if not field.is_zero(c)}
        else:
            self.terms = {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field, gens):
        return cls(field, gens)

    @classmethod
    def constant(cls, field, gens, c):
        c = field.coerce(c)
        return cls(field, gens, {(): c})

    @classmethod
    def gen(cls, field, gens, i):
        if not 0 <= i < len(gens):
            raise AmbientMismatch(f"generator index {i} out of range")
        return cls(field, gens, {(i,): field.one})

    @classmethod
    def monomial(cls, field, gens, word, c=None):
        c = field.one if c is None else field.coerce(c)
        return cls(field, gens, {tuple(word): c})

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Max word length, ``-inf`` for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(len(w) for w in self.terms)

    def lead_word(self) -> Word:
        """Deglex-largest word; raises on the zero polynomial."""
        if not self.terms:
            raise ValueError("zero polynomial has no lead word")
        return max(self.terms, key=deglex_key)

    def coeff(self, word: Word):
        return self.terms.get(tuple(word), self.field.zero)

    def sorted_terms(self):
        """Terms in descending deglex order (lead first)."""
        return sorted(self.terms.items(), key=lambda t: deglex_key(t[0]), reverse=True)

    def _check_ambient(self, other: "NcPoly"):
        if self.field != other.field or self.gens != other.gens:
            raise AmbientMismatch(
                f"operands live in different ambients: "
                f"{self.field}<{','.join(self.gens)}> vs {other.field}<{','.join(other.gens)}>"
            )

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        self._check_ambient(other)
        fld = self.field
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = fld.add(terms.get(w, fld.zero), c)
        return NcPoly(fld, self.gens, terms)

    def __sub__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        fld = self.field
        return NcPoly(fld, self.gens, {w: fld.neg(c) for w, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NcPoly):
            return self.scale(other)
        self._check_ambient(other)
        fld = self.field
        terms: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = fld.mul(c1, c2)
                terms[w] = fld.add(terms.get(w, fld.zero), c)
        return NcPoly(fld, self.gens, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        fld = self.field
        c = fld.coerce(c)
        if fld.is_zero(c):
            return NcPoly(fld, self.gens)
        return NcPoly(fld, self.gens, {w: fld.mul(c, cw) for w, cw in self.terms.items()})

    def monic(self):
        """Divide by the lead coefficient."""
        lw = self.lead_word()
        return self.scale(self.field.inv(self.terms[lw]))

    def __eq__(self, other):
        return (
            isinstance(other, NcPoly)
            and self.field == other.field
            and self.gens == other.gens
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.gens, frozenset(self.terms.items())))

    def __repr__(self):
        return format_poly(self)

    def map_words(self, fn):
        """Rebuild with words sent through ``fn`` (coefficients collected)."""
        fld = self.field
        terms: dict = {}
        for w, c in self.terms.items():
            w2 = fn(w)
            terms[w2] = fld.add(terms.get(w2, fld.zero), c)
        return NcPoly(fld, self.gens, terms)


def nc_add(p: NcPoly, q: NcPoly) -> NcPoly:
    return p + q


def nc_mul(p: NcPoly, q: NcPoly) -> NcPoly:
    return p * q


def nc_scale(c, p: NcPoly) -> NcPoly:
    return p.scale(c)


def substitute(p: NcPoly, images: list, target_gens: tuple | None = None) -> NcPoly:
    """Apply the unital multiplicative-linear extension of x_i -> images[i].

    All images must share one target ambient; the coefficient field must
    agree with the source's.  ``target_gens`` pins the ambient when the
    source has no generators (so no images to read it off).
    """
    if len(images) != len(p.gens):
        raise AmbientMismatch(
            f"expected {len(p.gens)} images, got {len(images)}"
        )
    if images:
        target = images[0]
        for im in images[1:]:
            target._check_ambient(im)
        tfield, tgens = target.field, target.gens
        if target_gens is not None and tgens != tuple(target_gens):
            raise AmbientMismatch("images disagree with the requested target ambient")
    else:
        tfield = p.field
        tgens = tuple(target_gens) if target_gens is not None else ()
    if tfield != p.field:
        raise AmbientMismatch(f"field mismatch: {p.field} vs {tfield}")
    acc = NcPoly.zero(tfield, tgens)
    one = NcPoly.constant(tfield, tgens, tfield.one)
    for w, c in p.terms.items():
        prod = one
        for i in w:
            prod = prod * images[i]
        acc = acc + prod.scale(c)
    return acc


# ---------------------------------------------------------------------------
# Presentation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """A finitely presented algebra k<gens>/(rels), truncated at ``bound``.

    The monomial order is fixed: degree-lexicographic over the listed
    generator order.  ``bound`` caps every degree the rewrite machinery
    will ever consider.
    """

    field: Field
    gens: tuple
    rels: tuple = dc_field(default=())
    bound: int = DEFAULT_BOUND

    def __post_init__(self):
        if len(set(self.gens)) != len(self.gens):
            raise ParseError("duplicate generator names")
        maxdeg = 0
        for r in self.rels:
            if r.field != self.field or r.gens != self.gens:
                raise AmbientMismatch("relation not over the presentation's ambient")
            if not r.is_zero:
                maxdeg = max(maxdeg, r.degree)
        if self.bound < max(maxdeg, 1):
            raise ParseError(
                f"bound {self.bound} below max relation degree {maxdeg}"
            )

    def gen_index(self, name: str) -> int:
        try:
            return self.gens.index(name)
        except ValueError:
            raise ParseError(f"unknown generator {name!r}")

    def poly(self, text: str) -> NcPoly:
        return parse_poly(text, self)

    def one(self) -> NcPoly:
        return NcPoly.constant(self.field, self.gens, self.field.one)

    def gen_poly(self, i: int) -> NcPoly:
        return NcPoly.gen(self.field, self.gens, i)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<num>\d+(?:/\d+|\.\d+(?:[eE][+-]?\d+)?)?)"
    r"|(?P<op>[*+\-=\[\],;])"
    r")"
)


def _tokenize(text: str, line: int):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", line, pos + 1)
        kind = m.lastgroup
        out.append((kind, m.group(kind), line, m.start(kind) + 1))
        pos = m.end()
    return out


class _PolyParser:
    """Recursive-descent parser for signed sums of words."""

    def __init__(self, tokens, pres: Presentation, line: int):
        self.toks = tokens
        self.i = 0
        self.pres = pres
        self.line = line

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of polynomial", self.line)
        self.i += 1
        return t

    def parse(self) -> NcPoly:
        pres = self.pres
        acc = NcPoly.zero(pres.field, pres.gens)
        sign = 1
        expect_term = True
        while True:
            t = self.peek()
            if t is None:
                if expect_term:
                    raise ParseError("dangling sign in polynomial", self.line)
                return acc
            kind, val, line, col = t
            if kind == "op" and val in "+-":
                self.next()
                if val == "-":
                    sign = -sign if expect_term else -1
                elif not expect_term:
                    sign = 1
                expect_term = True
                continue
            if not expect_term:
                raise ParseError(f"expected '+' or '-' before {val!r}", line, col)
            acc = acc + self._term(sign)
            sign = 1
            expect_term = False

    def _term(self, sign: int) -> NcPoly:
        pres = self.pres
        fld = pres.field
        coeff = fld.one
        word: list = []
        saw_coeff = False
        saw_name = False
        while True:
            t = self.peek()
            if t is None:
                break
            kind, val, line, col = t
            if kind == "num":
                if saw_name or saw_coeff:
                    raise ParseError("coefficient must precede the word", line, col)
                self.next()
                coeff = fld.parse(val)
                saw_coeff = True
            elif kind == "name":
                self.next()
                word.append(pres.gen_index(val))
                saw_name = True
            else:
                break
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "*":
                self.next()
                cont = self.peek()
                if cont is None or cont[0] not in ("name", "num"):
                    raise ParseError("dangling '*'", line, col)
                continue
            break
        if not saw_coeff and not saw_name:
            t = self.peek()
            raise ParseError(
                f"expected a term, found {t[1]!r}" if t else "expected a term",
                self.line,
            )
        if sign < 0:
            coeff = fld.neg(coeff)
        return NcPoly.monomial(fld, pres.gens, tuple(word), coeff)


def _statements(text: str):
    """Split into (line_number, statement) pairs on newlines/semicolons."""
    for ln, raw in enumerate(text.splitlines(), start=1):
        raw = raw.split("#", 1)[0]
        for part in raw.split(";"):
            part = part.strip()
            if part:
                yield ln, part


def parse_poly(text: str, pres: Presentation, line: int = 1) -> NcPoly:
    parser = _PolyParser(_tokenize(text, line), pres, line)
    p = parser.parse()
    if parser.peek() is not None:
        t = parser.peek()
        raise ParseError(f"trailing input {t[1]!r}", t[2], t[3])
    return p


def parse_presentation(text: str) -> Presentation:
    """Parse a presentation file; see the module docstring for the grammar."""
    field = None
    gens: list = []
    rel_texts: list = []
    bound = None
    seen_gens = False
    for ln, stmt in _statements(text):
        head, _, rest = stmt.partition(" ")
        rest = rest.strip()
        if head == "field":
            if field is not None:
                raise ParseError("duplicate 'field' statement", ln)
            field = parse_field(rest)
        elif head == "gens":
            if seen_gens:
                raise ParseError("duplicate 'gens' statement", ln)
            seen_gens = True
            for name in rest.split():
                if not NAME_RE.fullmatch(name):
                    raise ParseError(f"bad generator name {name!r}", ln)
                if name in gens:
                    raise ParseError(f"duplicate generator name {name!r}", ln)
                gens.append(name)
        elif head == "rel":
            rel_texts.append((ln, rest))
        elif head == "bound":
            try:
                bound = int(rest)
            except ValueError:
                raise ParseError(f"bad bound {rest!r}", ln)
            if bound <= 0:
                raise ParseError("bound must be positive", ln)
        else:
            raise ParseError(f"unknown statement {head!r}", ln)
    if field is None:
        raise ParseError("missing 'field' statement")
    if not seen_gens:
        raise ParseError("missing 'gens' statement")
    proto = Presentation(field, tuple(gens), (), bound or DEFAULT_BOUND)
    rels = []
    maxdeg = 1
    for ln, rtext in rel_texts:
        p = parse_poly(rtext, proto, line=ln)
        if p.is_zero:
            continue  # degenerate input hygiene
        maxdeg = max(maxdeg, p.degree)
        rels.append(p)
    if bound is None:
        bound = max(DEFAULT_BOUND, maxdeg)
    return Presentation(field, tuple(gens), tuple(rels), bound)


# ---------------------------------------------------------------------------
# Printing (canonical; parse o print == identity)
# ---------------------------------------------------------------------------


def format_word(w: Word, gens: tuple) -> str:
    if not w:
        return "1"
    return "*".join(gens[i] for i in w)


def format_poly(p: NcPoly) -> str:
    if p.is_zero:
        return "0"
    fld = p.field
    parts = []
    for w, c in p.sorted_terms():
        cs = fld.format(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if w and cs == "1":
            body = format_word(w, p.gens)
        elif w:
            body = f"{cs}*{format_word(w, p.gens)}"
        else:
            body = cs
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def format_presentation(pres: Presentation) -> str:
    lines = [f"field {pres.field.name}"]
    lines.append("gens " + " ".join(pres.gens) if pres.gens else "gens")
    for r in pres.rels:
        lines.append(f"rel {format_poly(r)}")
    lines.append(f"bound {pres.bound}")
    return "\n".join(lines) + "\n"
