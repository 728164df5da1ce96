"""Exact scalars: rationals and quadratic extensions Q(i), Q(sqrt m).

Rational values are plain :class:`fractions.Fraction` (or ``int``) objects.
An element with a nonzero irrational part is an :class:`ExactScalar`; every
arithmetic result is put back into canonical form, so an ``ExactScalar`` is
never secretly rational.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union


class FieldMismatch(ValueError):
    """Two elements from incompatible quadratic extensions were combined."""


def _squarefree(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


class ExactScalar:
    """``re + ir*sqrt(d)`` with ``ir != 0``; ``d == -1`` means Q(i)."""

    __slots__ = ("re", "ir", "d")

    def __init__(self, re_: Rational, ir: Rational, d: int):
        self.re = Fraction(re_)
        self.ir = Fraction(ir)
        self.d = d

    @staticmethod
    def make(re_, ir, d):
        """Canonical constructor: collapses to a Fraction when ``ir == 0``."""
        if ir == 0:
            return Fraction(re_)
        return ExactScalar(re_, ir, d)

    def _parts(self, other):
        if isinstance(other, ExactScalar):
            if other.d != self.d:
                raise FieldMismatch(f"cannot combine sqrt({self.d}) and sqrt({other.d})")
            return other.re, other.ir
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return ExactScalar.make(self.re + p[0], self.ir + p[1], self.d)

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return ExactScalar.make(self.re - p[0], self.ir - p[1], self.d)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return ExactScalar.make(p[0] - self.re, p[1] - self.ir, self.d)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        return ExactScalar.make(
            self.re * a + self.d * self.ir * b, self.re * b + self.ir * a, self.d
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re - self.d * self.ir * self.ir

    def conjugate_sqrt(self) -> "ExactScalar":
        """The Galois conjugate ``re - ir*sqrt(d)``."""
        return ExactScalar(self.re, -self.ir, self.d)

    def inverse(self):
        n = self.norm()
        # n == 0 only for d a perfect square, excluded by Field validation.
        return ExactScalar.make(self.re / n, -self.ir / n, self.d)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        if isinstance(other, ExactScalar):
            return self * other.inverse()
        if p[0] == 0:
            raise ZeroDivisionError("division by zero")
        return ExactScalar.make(self.re / p[0], self.ir / p[0], self.d)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.inverse() * p[0]

    def __neg__(self):
        return ExactScalar(-self.re, -self.ir, self.d)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out: Union[Fraction, ExactScalar] = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self.d == other.d and self.re == other.re and self.ir == other.ir
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.re, self.ir, self.d))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"ExactScalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, ExactScalar]


@dataclass(frozen=True)
class Field:
    """Q (``d is None``), Q(i) (``d == -1``) or Q(sqrt d) for square-free d > 1."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None and self.d != -1 and not _squarefree(self.d):
            raise ValueError(f"Q(sqrt {self.d}) needs a square-free integer > 1")

    @property
    def name(self) -> str:
        if self.d is None:
            return "Q"
        if self.d == -1:
            return "Q(i)"
        return f"Q(sqrt{self.d})"

    @property
    def is_rational(self) -> bool:
        return self.d is None

    def gen(self) -> ExactScalar:
        if self.d is None:
            raise ValueError("Q has no irrational generator")
        return ExactScalar(0, 1, self.d)

    def element(self, re_, ir=0):
        if ir and self.d is None:
            raise FieldMismatch("irrational part given for Q")
        return ExactScalar.make(re_, ir, self.d) if self.d is not None else Fraction(re_)

    def contains(self, x) -> bool:
        if isinstance(x, (int, Fraction)):
            return True
        return isinstance(x, ExactScalar) and x.d == self.d

    def coerce(self, x) -> Scalar:
        if isinstance(x, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, Fraction):
            return x
        if isinstance(x, ExactScalar):
            if x.d != self.d:
                raise FieldMismatch(f"element of Q(sqrt {x.d}) is not in {self.name}")
            return x
        if isinstance(x, str):
            return parse_scalar(x, self)
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def join(self, other: "Field") -> "Field":
        if self.d is None:
            return other
        if other.d is None or other.d == self.d:
            return self
        raise FieldMismatch(f"{self.name} and {other.name} cannot be mixed")

    def to_json(self) -> str:
        return self.name

    @staticmethod
    def from_json(s) -> "Field":
        if s is None or s in ("Q", "QQ", "rational"):
            return QQ
        if s in ("Q(i)", "QQ(i)", "gaussian"):
            return QQ_I
        m = re.fullmatch(r"Q\(sqrt\s*(\d+)\)|Q\(sqrt\((\d+)\)\)", str(s))
        if m:
            return Field(int(m.group(1) or m.group(2)))
        raise ValueError(f"unknown field {s!r}")


QQ = Field(None)
QQ_I = Field(-1)


def field_of(x) -> Field:
    if isinstance(x, ExactScalar):
        return Field(x.d)
    return QQ


def sign(x: Scalar, embedding: int = 1) -> int:
    """Sign of a real scalar under the embedding sqrt(d) -> embedding*sqrt(d)."""
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    if x.d < 0:
        raise ValueError("Q(i) has no ordering")
    a, b = x.re, x.ir * embedding
    sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
    if sa == 0 or sa == sb:
        return sb if sa == 0 else sa
    if sb == 0:
        return sa
    # opposite signs: compare a^2 with d*b^2
    diff = a * a - x.d * b * b
    return sa if diff > 0 else sb


def to_float(x: Scalar, embedding: int = 1) -> float | complex:
    if isinstance(x, (int, Fraction)):
        return float(x)
    if x.d == -1:
        return complex(float(x.re), float(x.ir))
    return float(x.re) + embedding * float(x.ir) * math.sqrt(x.d)


def is_zero(x) -> bool:
    return not isinstance(x, ExactScalar) and x == 0


def _fmt_q(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """Serialize exactly: ``"3/2"``, ``"1/2+3*i"``, ``"-1+2*sqrt(5)"``."""
    if isinstance(x, (int, Fraction)):
        return _fmt_q(Fraction(x))
    gen = "i" if x.d == -1 else f"sqrt({x.d})"
    ir = _fmt_q(x.ir)
    if ir in ("1", "-1"):
        term = gen if ir == "1" else f"-{gen}"
    else:
        term = f"{ir}*{gen}"
    if x.re == 0:
        return term
    sep = "" if term.startswith("-") else "+"
    return f"{_fmt_q(x.re)}{sep}{term}"


_TERM = re.compile(r"([+-]?)([^+-]+)")
_GEN = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(i|sqrt\((\d+)\))$")
_RATIONAL = re.compile(r"^\d+(?:/\d+)?$")


def parse_scalar(s, field: Field | None = None) -> Scalar:
    """Inverse of :func:`format_scalar`; also accepts ints and ``"i"``, ``"-sqrt(2)"``."""
    if isinstance(s, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if isinstance(s, ExactScalar):
        return field.coerce(s) if field is not None else s
    if not isinstance(s, str):
        raise ValueError(f"not an exact scalar: {s!r}")
    text = s.replace(" ", "")
    if not text or _TERM.sub("", text):
        raise ValueError(f"malformed exact scalar {s!r}")
    re_part, ir, d = Fraction(0), Fraction(0), None
    for sgn, body in _TERM.findall(text):
        k = -1 if sgn == "-" else 1
        if _RATIONAL.match(body):
            re_part += k * Fraction(body)
            continue
        g = _GEN.match(body)
        if not g:
            raise ValueError(f"malformed exact scalar {s!r}")
        this_d = -1 if g.group(2) == "i" else int(g.group(3))
        if d is not None and d != this_d:
            raise FieldMismatch(f"mixed generators in {s!r}")
        d = this_d
        ir += k * (Fraction(g.group(1)) if g.group(1) else 1)
    if d is None:
        x: Scalar = re_part
    else:
        Field(d)  # validates
        x = ExactScalar.make(re_part, ir, d)
    return field.coerce(x) if field is not None else x
