import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from assocvar.errors import AmbientMismatch, FieldError, ParseError
from assocvar.fields import GF, QQ, parse_field
from assocvar.freealg import (
    NcPoly,
    format_poly,
    format_presentation,
    parse_poly,
    parse_presentation,
    substitute,
)

from conftest import algebra, random_poly


def test_parse_circle_f5():
    p = parse_presentation("field F5; gens x y; rel x*x + y*y - 1")
    assert p.field == GF(5)
    assert p.gens == ("x", "y")
    assert len(p.rels) == 1
    assert p.rels[0].coeff((0, 0)) == 1
    assert p.rels[0].coeff(()) == 4  # -1 mod 5


def test_parse_free_algebra_no_rels():
    p = parse_presentation("field Q; gens x")
    assert p.field == QQ
    assert p.rels == ()


def test_nonprime_modulus_rejected():
    with pytest.raises(FieldError, match="non-prime"):
        parse_presentation("field F4; gens x")


def test_duplicate_generator_rejected():
    with pytest.raises(ParseError, match="duplicate"):
        parse_presentation("field Q; gens x x")


def test_unknown_generator_in_relation():
    with pytest.raises(ParseError, match="unknown generator"):
        parse_presentation("field Q; gens x; rel x*y")


def test_parse_error_carries_line():
    with pytest.raises(ParseError, match="line 3"):
        parse_presentation("field Q\ngens x\nrel x*!")


def test_word_multiplication_concatenates():
    a = algebra("field Q; gens x y")
    x, y = a.poly("x"), a.poly("y")
    assert x * y == a.poly("x*y")
    assert (x * y) * y == a.poly("x*y*y")


def test_product_expansion_noncommutative():
    a = algebra("field Q; gens x y")
    x, y = a.poly("x"), a.poly("y")
    lhs = (x + y) * (x - y)
    assert lhs == a.poly("x*x - x*y + y*x - y*y")
    assert lhs != a.poly("x*x - y*y")


def test_one_is_identity():
    a = algebra("field F5; gens x y")
    p = a.poly("2*x*y + 3")
    assert a.one() * p == p
    assert p * a.one() == p


def test_canonical_zero():
    a = algebra("field Q; gens x y")
    p = a.poly("x*y - 2*x + 1")
    z = p + (-p)
    assert z.is_zero
    assert z.terms == {}
    assert z == NcPoly.zero(a.field, a.gens)


def test_degree_of_zero_is_minus_inf():
    a = algebra("field Q; gens x")
    assert NcPoly.zero(a.field, a.gens).degree == float("-inf")
    assert a.poly("x*x").degree == 2


def test_ambient_mismatch_raises():
    a = algebra("field Q; gens x y")
    b = algebra("field Q; gens u v")
    with pytest.raises(AmbientMismatch):
        a.poly("x") + b.poly("u")
    c = algebra("field F5; gens x y")
    with pytest.raises(AmbientMismatch):
        a.poly("x") * c.poly("x")


def test_substitute_swap():
    a = algebra("field Q; gens x y")
    p = a.poly("x*y")
    assert substitute(p, [a.poly("y"), a.poly("x")]) == a.poly("y*x")


def test_substitute_expansion_commutative_target():
    src = algebra("field Q; gens x")
    tgt = algebra("field Q; gens x")
    p = src.poly("x*x")
    img = tgt.poly("x + 1")
    assert substitute(p, [img]) == tgt.poly("x*x + 2*x + 1")


def test_substitute_fixes_constants():
    a = algebra("field Q; gens x y")
    c = a.poly("7")
    assert substitute(c, [a.poly("y"), a.poly("x")]) == c


def test_substitute_image_count_mismatch():
    a = algebra("field Q; gens x y")
    with pytest.raises(AmbientMismatch):
        substitute(a.poly("x"), [a.poly("x")])


def test_fraction_coefficients_exact():
    a = algebra("field Q; gens x")
    p = a.poly("1/3*x + 1/6*x")
    assert p == a.poly("1/2*x")
    assert p.coeff((0,)) == Fraction(1, 2)


def test_presentation_roundtrip_variants():
    texts = [
        "field F5; gens x y; rel x*x + y*y - 1",
        "field Q; gens x y z; rel x*y - y*x; rel 1/2*z*z - 3; bound 6",
        "field Q; gens a",
        "field R; gens u v; rel u*u + v*v - 1",
    ]
    for t in texts:
        p = parse_presentation(t)
        assert parse_presentation(format_presentation(p)) == p


def test_poly_print_parse_roundtrip():
    a = algebra("field Q; gens x y")
    rng = random.Random(7)
    for _ in range(50):
        p = random_poly(rng, a.pres, 4)
        assert parse_poly(format_poly(p), a.pres) == p


def test_bound_below_relation_degree_rejected():
    with pytest.raises(ParseError, match="bound"):
        parse_presentation("field Q; gens x; rel x*x*x; bound 2")


def test_parse_field_tokens():
    assert parse_field("Q") == QQ
    assert parse_field("F7") == GF(7)
    with pytest.raises(FieldError):
        parse_field("F9")
    with pytest.raises(FieldError):
        parse_field("GF5")


# -- ring axioms on random samples (spec invariants) -------------------------

F5_2 = algebra("field F5; gens x y")


@st.composite
def f5_polys(draw):
    n_terms = draw(st.integers(0, 4))
    terms = {}
    fld = F5_2.field
    for _ in range(n_terms):
        w = tuple(draw(st.lists(st.integers(0, 1), max_size=4)))
        c = draw(st.integers(0, 4))
        terms[w] = fld.add(terms.get(w, 0), c)
    return NcPoly(fld, F5_2.gens, terms)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(f5_polys(), f5_polys(), f5_polys())
def test_ring_axioms_f5(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) * r == p * r + q * r


def test_degree_additive_over_domain():
    rng = random.Random(3)
    a = algebra("field F5; gens x y")
    for _ in range(100):
        p = random_poly(rng, a.pres, 4)
        q = random_poly(rng, a.pres, 4)
        if p.is_zero or q.is_zero:
            assert (p * q).is_zero
        else:
            assert (p * q).degree == p.degree + q.degree
