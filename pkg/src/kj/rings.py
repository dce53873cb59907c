"""Exact coefficient rings: integers, rationals, Q(sqrt2), and odd prime fields.

Elements are plain Python objects supporting ``+ - * /`` and ``==``; a small
ring adapter carries the constants and coercions the matrix code needs.
Q(sqrt2) is implemented as the quadratic field Q[t]/(t^2 - 2), never as a
float, so half-integer powers of two are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "QSqrt2",
    "GFElement",
    "Ring",
    "ZZ",
    "QQ",
    "QSQRT2",
    "GF",
    "half_power_of_two",
]


@dataclass(frozen=True)
class QSqrt2:
    """Element a + b*sqrt2 of the field Q(sqrt2), with a, b rational."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(a, b=0) -> "QSqrt2":
        return QSqrt2(Fraction(a), Fraction(b))

    def __add__(self, other):
        other = _coerce_qs2(other)
        if other is NotImplemented:
            return NotImplemented
        return QSqrt2(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        other = _coerce_qs2(other)
        if other is NotImplemented:
            return NotImplemented
        return QSqrt2(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_qs2(other)
        if other is NotImplemented:
            return NotImplemented
        # (a + b s)(c + d s) = ac + 2bd + (ad + bc) s,  s^2 = 2
        return QSqrt2(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QSqrt2":
        # conjugate / norm; the norm a^2 - 2 b^2 vanishes only at 0
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt2)")
        return QSqrt2(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        other = _coerce_qs2(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce_qs2(other) * self.inverse()

    def __eq__(self, other):
        other = _coerce_qs2(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def conjugate(self) -> "QSqrt2":
        return QSqrt2(self.a, -self.b)

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        return f"{self.a} + {self.b}*sqrt2"


def _coerce_qs2(x):
    if isinstance(x, QSqrt2):
        return x
    if isinstance(x, (int, Fraction)):
        return QSqrt2(Fraction(x), Fraction(0))
    return NotImplemented


def half_power_of_two(k: int) -> QSqrt2:
    """Exact 2**(k/2) in Q(sqrt2) for any integer k (possibly negative)."""
    m, r = divmod(k, 2)
    base = Fraction(2) ** m
    if r == 0:
        return QSqrt2(base, Fraction(0))
    return QSqrt2(Fraction(0), base)


class GFElement:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other
        if isinstance(other, int):
            return GFElement(other, self.p)
        return None

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else GFElement(self.v + o.v, self.p)

    __radd__ = __add__

    def __neg__(self):
        return GFElement(-self.v, self.p)

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else GFElement(self.v - o.v, self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else GFElement(self.v * o.v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return GFElement(self.v * pow(o.v, self.p - 2, self.p), self.p)

    def __eq__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self.v == o.v

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


class Ring:
    """Adapter bundling the constants and coercions for one coefficient ring."""

    def __init__(self, name: str, zero, one, from_int, is_field: bool, char: int):
        self.name = name
        self.zero = zero
        self.one = one
        self.from_int = from_int
        self.is_field = is_field
        self.characteristic = char

    def is_zero(self, x) -> bool:
        return x == self.zero

    def render(self, x) -> str:
        return str(x)

    def __repr__(self):
        return f"Ring({self.name})"


ZZ = Ring("Z", 0, 1, lambda n: int(n), is_field=False, char=0)
QQ = Ring("Q", Fraction(0), Fraction(1), lambda n: Fraction(n), is_field=True, char=0)
QSQRT2 = Ring(
    "Q(sqrt2)",
    QSqrt2.of(0),
    QSqrt2.of(1),
    lambda n: QSqrt2.of(n),
    is_field=True,
    char=0,
)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


_gf_cache: dict[int, Ring] = {}


def GF(p: int) -> Ring:
    """The prime field F_p. Lee theory additionally requires p odd."""
    if p in _gf_cache:
        return _gf_cache[p]
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    ring = Ring(
        f"F{p}",
        GFElement(0, p),
        GFElement(1, p),
        lambda n, p=p: GFElement(n, p),
        is_field=True,
        char=p,
    )
    _gf_cache[p] = ring
    return ring
