import random

import pytest

from assocvar.algebra import FpAlgebra
from assocvar.freealg import NcPoly, parse_presentation


def algebra(text: str) -> FpAlgebra:
    return FpAlgebra(parse_presentation(text))


@pytest.fixture(scope="session")
def free_q2():
    return algebra("field Q; gens x y")


@pytest.fixture(scope="session")
def comm_q2():
    return algebra("field Q; gens x y; rel x*y - y*x")


@pytest.fixture(scope="session")
def circle_q():
    return algebra("field Q; gens x y; rel x*y - y*x; rel x*x + y*y - 1")


@pytest.fixture(scope="session")
def circle_f5():
    return algebra("field F5; gens x y; rel x*y - y*x; rel x*x + y*y - 1")


@pytest.fixture(scope="session")
def weyl_q():
    return algebra("field Q; gens x y; rel y*x - x*y + 1")


@pytest.fixture(scope="session")
def free_f5():
    return algebra("field F5; gens x y")


def random_poly(rng: random.Random, pres, max_deg: int, n_terms: int = 4) -> NcPoly:
    """Random element with words up to max_deg; may be zero."""
    fld = pres.field
    gens = range(len(pres.gens))
    terms = {}
    for _ in range(rng.randint(1, n_terms)):
        deg = rng.randint(0, max_deg)
        w = tuple(rng.choice(list(gens)) for _ in range(deg)) if pres.gens else ()
        if fld.name.startswith("F"):
            c = rng.randrange(fld.p)
        else:
            c = rng.randint(-4, 4)
        c = fld.coerce(c)
        terms[w] = fld.add(terms.get(w, fld.zero), c)
    return NcPoly(fld, pres.gens, terms)


def random_nonzero_poly(rng, pres, max_deg, n_terms=4) -> NcPoly:
    while True:
        p = random_poly(rng, pres, max_deg, n_terms)
        if not p.is_zero:
            return p
