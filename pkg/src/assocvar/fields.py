"""Coefficient fields: exact rationals, prime fields F_p, and floats.

Scalars are plain Python values (``Fraction``, ``int`` in ``[0, p)``,
``float``); a field object supplies the arithmetic on them.  Exact fields
never round.  The float field is admitted only by the numeric geodesic
layer and by metric evaluation; everything symbolic stays exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldError

FLOAT_ZERO_TOL = 1e-9


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface; concrete fields below."""

    name = "?"
    exact = True
    ordered = False

    def coerce(self, v):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def parse(self, token: str):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class RationalField(Field):
    name = "Q"
    ordered = True
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, v):
        if isinstance(v, Fraction):
            return v
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            return Fraction(v)
        raise FieldError(f"cannot coerce {v!r} into Q")

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero in Q")
        return 1 / Fraction(a)

    def parse(self, token):
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational literal {token!r}: {exc}")


class PrimeField(Field):
    ordered = False

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"non-prime modulus {p}")
        if p >= 2**31:
            raise FieldError(f"modulus {p} too large (must be < 2^31)")
        self.p = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def coerce(self, v):
        if isinstance(v, int):
            return v % self.p
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise FieldError(f"denominator of {v} vanishes mod {self.p}")
            return (v.numerator * pow(v.denominator, -1, self.p)) % self.p
        if isinstance(v, str):
            return self.parse(v)
        raise FieldError(f"cannot coerce {v!r} into {self.name}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError(f"division by zero in {self.name}")
        return pow(a, -1, self.p)

    def parse(self, token):
        try:
            return int(token) % self.p
        except ValueError:
            raise FieldError(f"bad integer literal {token!r}")


class RealField(Field):
    """Floating-point reals; zero tests use a fixed tolerance."""

    name = "R"
    exact = False
    ordered = True
    zero = 0.0
    one = 1.0

    def coerce(self, v):
        if isinstance(v, (int, float, Fraction)):
            return float(v)
        if isinstance(v, str):
            return self.parse(v)
        raise FieldError(f"cannot coerce {v!r} into R")

    def inv(self, a):
        if abs(a) <= FLOAT_ZERO_TOL:
            raise FieldError("division by (numerical) zero in R")
        return 1.0 / a

    def is_zero(self, a):
        return abs(a) <= FLOAT_ZERO_TOL

    def parse(self, token):
        try:
            if "/" in token:
                return float(Fraction(token))
            return float(token)
        except (ValueError, ZeroDivisionError):
            raise FieldError(f"bad real literal {token!r}")

    def format(self, a):
        return repr(a)


QQ = RationalField()
RR = RealField()

_prime_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    try:
        return _prime_cache[p]
    except KeyError:
        _prime_cache[p] = fld = PrimeField(p)
        return fld


def parse_field(token: str) -> Field:
    """Parse a field designator: ``Q``, ``R`` or ``F<p>`` with p prime."""
    if token == "Q":
        return QQ
    if token == "R":
        return RR
    if token.startswith("F") and token[1:].isdigit():
        return GF(int(token[1:]))
    raise FieldError(f"unknown field {token!r} (expected Q, R, or F<prime>)")
