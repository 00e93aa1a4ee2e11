"""Exact arithmetic in Q(i, sqrt(d)).

Elements are a + b*i + c*r + e*i*r with r = sqrt(d) and rational parts.
The radical d is a session-wide setting (default 2); see :func:`set_radical`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

from ..errors import DivisionByZero

_D = 2
_ZERO = mpq(0)
_ONE = mpq(1)


def _squarefree(d: int) -> bool:
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def set_radical(d: int) -> None:
    """Fix the square-free integer d >= 2 for all subsequent arithmetic."""
    global _D
    d = int(d)
    if d < 2 or not _squarefree(d):
        raise ValueError(f"radical must be a square-free integer >= 2, got {d}")
    _D = d


def radical() -> int:
    return _D


def to_mpq(x) -> mpq:
    if isinstance(x, FieldElement):
        if x.b or x.c or x.e:
            raise TypeError(f"{x} is not rational")
        return x.a
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return mpq(x)


def _new(a, b, c, e) -> "FieldElement":
    obj = object.__new__(FieldElement)
    obj.a = a
    obj.b = b
    obj.c = c
    obj.e = e
    return obj


class FieldElement:
    __slots__ = ("a", "b", "c", "e")

    def __init__(self, a=0, b=0, c=0, e=0):
        self.a = to_mpq(a)
        self.b = to_mpq(b)
        self.c = to_mpq(c)
        self.e = to_mpq(e)

    # construction helpers
    @staticmethod
    def coerce(x) -> "FieldElement":
        if isinstance(x, FieldElement):
            return x
        return _new(to_mpq(x), _ZERO, _ZERO, _ZERO)

    @staticmethod
    def i() -> "FieldElement":
        return _new(_ZERO, _ONE, _ZERO, _ZERO)

    @staticmethod
    def rt() -> "FieldElement":
        return _new(_ZERO, _ZERO, _ONE, _ZERO)

    # predicates
    def __bool__(self) -> bool:
        return bool(self.a or self.b or self.c or self.e)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.e)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.e)

    def is_real(self) -> bool:
        return not (self.b or self.e)

    # arithmetic
    def __add__(self, o):
        if not isinstance(o, FieldElement):
            if isinstance(o, (int, Rational)) or type(o) is type(_ZERO):
                return _new(self.a + to_mpq(o), self.b, self.c, self.e)
            return NotImplemented
        return _new(self.a + o.a, self.b + o.b, self.c + o.c, self.e + o.e)

    __radd__ = __add__

    def __neg__(self):
        return _new(-self.a, -self.b, -self.c, -self.e)

    def __pos__(self):
        return self

    def __sub__(self, o):
        if not isinstance(o, FieldElement):
            if isinstance(o, (int, Rational)) or type(o) is type(_ZERO):
                return _new(self.a - to_mpq(o), self.b, self.c, self.e)
            return NotImplemented
        return _new(self.a - o.a, self.b - o.b, self.c - o.c, self.e - o.e)

    def __rsub__(self, o):
        return (-self).__add__(o)

    def __mul__(self, o):
        if not isinstance(o, FieldElement):
            if isinstance(o, (int, Rational)) or type(o) is type(_ZERO):
                q = to_mpq(o)
                return _new(self.a * q, self.b * q, self.c * q, self.e * q)
            return NotImplemented
        a, b, c, e = self.a, self.b, self.c, self.e
        a2, b2, c2, e2 = o.a, o.b, o.c, o.e
        if not (b2 or c2 or e2):
            return _new(a * a2, b * a2, c * a2, e * a2)
        if not (b or c or e):
            return _new(a * a2, a * b2, a * c2, a * e2)
        d = _D
        return _new(
            a * a2 + d * c * c2 - b * b2 - d * e * e2,
            a * b2 + b * a2 + d * (c * e2 + e * c2),
            a * c2 + c * a2 - b * e2 - e * b2,
            a * e2 + e * a2 + c * b2 + b * c2,
        )

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        a, b, c, e = self.a, self.b, self.c, self.e
        if not (b or c or e):
            if not a:
                raise DivisionByZero("inverse of zero")
            return _new(1 / a, _ZERO, _ZERO, _ZERO)
        d = _D
        # norm to Q(r): X^2 + Y^2 with X = a + c r, Y = b + e r
        n0 = a * a + d * c * c + b * b + d * e * e
        n1 = 2 * (a * c + b * e)
        den = n0 * n0 - d * n1 * n1
        if not den:
            raise DivisionByZero("inverse of zero")
        # (n0 - n1 r) / den
        m0, m1 = n0 / den, -n1 / den
        # conj = X - Y i, multiply by m0 + m1 r
        return _new(
            a * m0 + d * c * m1,
            -(b * m0 + d * e * m1),
            a * m1 + c * m0,
            -(b * m1 + e * m0),
        )

    def __truediv__(self, o):
        if not isinstance(o, FieldElement):
            if isinstance(o, (int, Rational)) or type(o) is type(_ZERO):
                q = to_mpq(o)
                if not q:
                    raise DivisionByZero("division by zero")
                return _new(self.a / q, self.b / q, self.c / q, self.e / q)
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        return FieldElement.coerce(o) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "FieldElement":
        return _new(self.a, -self.b, self.c, -self.e)

    # comparisons
    def __eq__(self, o):
        if not isinstance(o, FieldElement):
            try:
                o = FieldElement.coerce(o)
            except (TypeError, ValueError):
                return NotImplemented
        return self.a == o.a and self.b == o.b and self.c == o.c and self.e == o.e

    def __hash__(self):
        if not (self.b or self.c or self.e):
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.e))

    def real_sign(self) -> int:
        """Sign of a real element a + c*sqrt(d); exact."""
        if self.b or self.e:
            raise ValueError(f"{self} is not real")
        x, y = self.a, self.c
        sx = (x > 0) - (x < 0)
        sy = (y > 0) - (y < 0)
        if sy == 0 or sx == sy:
            return sx or sy
        if sx == 0:
            return sy
        lhs, rhs = x * x, _D * y * y
        if lhs == rhs:
            return 0
        return sx if lhs > rhs else sy

    def abs_real(self) -> "FieldElement":
        return -self if self.real_sign() < 0 else self

    def __lt__(self, o):
        return (self - FieldElement.coerce(o)).real_sign() < 0

    def __le__(self, o):
        return (self - FieldElement.coerce(o)).real_sign() <= 0

    def __gt__(self, o):
        return (self - FieldElement.coerce(o)).real_sign() > 0

    def __ge__(self, o):
        return (self - FieldElement.coerce(o)).real_sign() >= 0

    def __repr__(self):
        return f"FieldElement({format_field(self)})"

    def __str__(self):
        return format_field(self)


ZERO = _new(_ZERO, _ZERO, _ZERO, _ZERO)
ONE = _new(_ONE, _ZERO, _ZERO, _ZERO)
I = _new(_ZERO, _ONE, _ZERO, _ZERO)


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_field(x: FieldElement) -> str:
    """Render in the manifest scalar syntax, e.g. ``1/2 - 3*i + rt``."""
    parts = []
    for value, unit in ((x.a, ""), (x.b, "i"), (x.c, "rt"), (x.e, "i*rt")):
        if not value:
            continue
        neg = value < 0
        mag = -value if neg else value
        if unit:
            body = unit if mag == 1 else f"{format_rational(mag)}*{unit}"
        else:
            body = format_rational(mag)
        parts.append(("-" if neg else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def field_arith(x: FieldElement, y: FieldElement | None, op: str) -> FieldElement:
    """Dispatch helper: op in {'add', 'mul', 'inv', 'conj'}."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "conj":
        return x.conj()
    raise ValueError(f"unknown operation {op!r}")


def root_of_unity(num: int, den: int) -> FieldElement:
    """exp(2*pi*i*num/den) when it lies in the current field, else ValueError."""
    num %= den
    from math import gcd

    g = gcd(num, den) if num else den
    num, den = num // g, den // g
    half = mpq(1, 2)
    table: dict[int, dict[int, FieldElement]] = {
        1: {0: ONE},
        2: {1: -ONE},
        4: {1: I, 3: -I},
    }
    if _D == 2:
        s = _new(_ZERO, _ZERO, half, _ZERO)  # sqrt(2)/2
        si = _new(_ZERO, _ZERO, _ZERO, half)
        table[8] = {1: s + si, 3: -s + si, 5: -s - si, 7: s - si}
    if _D == 3:
        c = _new(_ZERO, _ZERO, half, _ZERO)  # sqrt(3)/2
        h = _new(half, _ZERO, _ZERO, _ZERO)
        hi = _new(_ZERO, half, _ZERO, _ZERO)
        ci = _new(_ZERO, _ZERO, _ZERO, half)
        table[3] = {1: -h + ci, 2: -h - ci}
        table[6] = {1: h + ci, 5: h - ci}
        table[12] = {1: c + hi, 5: -c + hi, 7: -c - hi, 11: c - hi}
    try:
        return table[den][num]
    except KeyError:
        raise ValueError(f"exp(2*pi*i*{num}/{den}) is not in Q(i, sqrt({_D}))") from None
