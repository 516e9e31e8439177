"""Exact scalars: rationals and prime fields.

Every computation in this package is exact.  Scalars are either
`fractions.Fraction` (always in lowest terms with positive denominator)
or `ModInt` (canonical representatives in [0, p) for a prime p).  A
`Field` object builds, coerces, parses and formats scalars of its kind;
scalar arithmetic itself goes through the ordinary Python operators.
"""

from __future__ import annotations

import re
from fractions import Fraction


class FieldError(ValueError):
    """Bad field construction, parsing, or mixed-field arithmetic."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class ModInt:
    """Element of F_p, stored as the canonical representative in [0, p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _lift(self, other):
        if isinstance(other, ModInt):
            if other.modulus != self.modulus:
                raise FieldError(
                    f"mixed moduli: {self.modulus} and {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return ModInt(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return ModInt(self.value - v, self.modulus)

    def __rsub__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return ModInt(v - self.value, self.modulus)

    def __mul__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return ModInt(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModInt(-self.value, self.modulus)

    def _inverse_value(self) -> int:
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.modulus}")
        return pow(self.value, self.modulus - 2, self.modulus)

    def __truediv__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        inv = ModInt(v, self.modulus)._inverse_value()
        return ModInt(self.value * inv, self.modulus)

    def __rtruediv__(self, other):
        v = self._lift(other)
        if v is None:
            return NotImplemented
        return ModInt(v * self._inverse_value(), self.modulus)

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"ModInt({self.value}, {self.modulus})"


_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class Field:
    """Factory and codec for the scalars of one coefficient field."""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def coerce(self, x):
        """Turn x into a scalar of this field, or raise FieldError."""
        raise NotImplementedError

    def parse(self, text: str):
        """Parse an exact literal ('a/b' or integer), or raise FieldError."""
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def spec(self) -> str:
        """The literal field descriptor used in problem files."""
        raise NotImplementedError

    def __repr__(self):
        return self.spec()


class RationalField(Field):

    characteristic = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise FieldError(f"not a rational scalar: {x!r}")

    def parse(self, text):
        text = text.strip()
        if not _RATIONAL_RE.match(text):
            raise FieldError(f"bad rational literal: {text!r}")
        num, _, den = text.partition("/")
        if den:
            if int(den) == 0:
                raise FieldError(f"zero denominator: {text!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(num))

    def spec(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p

    @property
    def characteristic(self):
        return self.p

    def zero(self):
        return ModInt(0, self.p)

    def one(self):
        return ModInt(1, self.p)

    def from_int(self, n):
        return ModInt(n, self.p)

    def coerce(self, x):
        if isinstance(x, ModInt):
            if x.modulus != self.p:
                raise FieldError(f"scalar mod {x.modulus} in F_{self.p}")
            return x
        if isinstance(x, int):
            return ModInt(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(
                    f"denominator of {x} is divisible by {self.p}")
            den = ModInt(x.denominator, self.p)._inverse_value()
            return ModInt(x.numerator * den, self.p)
        raise FieldError(f"not an F_{self.p} scalar: {x!r}")

    def parse(self, text):
        text = text.strip()
        if not _RATIONAL_RE.match(text):
            raise FieldError(f"bad field literal: {text!r}")
        num, _, den = text.partition("/")
        if den:
            return self.coerce(Fraction(int(num), int(den)))
        return ModInt(int(num), self.p)

    def spec(self):
        return f"Fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = RationalField()


def field_from_spec(text: str) -> Field:
    """Resolve a field descriptor: 'Q' or 'Fp:<prime>'."""
    text = text.strip()
    if text == "Q":
        return QQ
    if text.startswith("Fp:"):
        tail = text[3:]
        if not tail.isdigit():
            raise FieldError(f"bad prime field descriptor: {text!r}")
        return PrimeField(int(tail))
    raise FieldError(f"unknown field descriptor: {text!r}")
