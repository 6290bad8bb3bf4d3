"""Exact rationals and univariate rational polynomials.

Rationals are :class:`fractions.Fraction`.  :class:`RatPoly` is a dense,
immutable polynomial ordered lexicographically: ``p > q`` iff the leading
coefficient of ``p - q`` is positive.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

Rat = Fraction

LESS, EQUAL, GREATER = -1, 0, 1


def parse_rat(value) -> Fraction:
    """Parse ``"a/b"``, ``"a"``, an int or a Fraction into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot read {type(value).__name__} as a rational")


def format_rat(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class RatPoly:
    """Polynomial with Fraction coefficients, ``coeffs[k]`` is the x^k term."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [parse_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def parse(cls, data) -> "RatPoly":
        """Read an ascending coefficient array, or a bare scalar."""
        if isinstance(data, RatPoly):
            return data
        if isinstance(data, (list, tuple)):
            return cls(data)
        return cls([data])

    def to_json(self) -> list[str]:
        return [format_rat(c) for c in self.coeffs]

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_positive(self) -> bool:
        return self.leading > 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = format_rat(mag)
            else:
                xs = "x" if k == 1 else f"x^{k}"
                body = xs if mag == 1 else f"{format_rat(mag)}*{xs}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    @staticmethod
    def _coerce(other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        return RatPoly([other])

    def __add__(self, other) -> "RatPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "RatPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatPoly":
        if not isinstance(other, RatPoly):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "RatPoly":
        c = parse_rat(c)
        return RatPoly(c * a for a in self.coeffs)

    def __truediv__(self, c) -> "RatPoly":
        c = parse_rat(c)
        if c == 0:
            raise ZeroDivisionError("polynomial divided by zero")
        return self.scale(1 / c)

    def __call__(self, x0) -> Fraction:
        return eval_at(self, x0)

    # lexicographic order
    def __lt__(self, other) -> bool:
        return lex_compare(self, self._coerce(other)) == LESS

    def __le__(self, other) -> bool:
        return lex_compare(self, self._coerce(other)) != GREATER

    def __gt__(self, other) -> bool:
        return lex_compare(self, self._coerce(other)) == GREATER

    def __ge__(self, other) -> bool:
        return lex_compare(self, self._coerce(other)) != LESS


def lex_compare(p: RatPoly, q: RatPoly) -> int:
    """Return LESS, EQUAL or GREATER comparing p and q lexicographically."""
    lead = (p - q).leading
    if lead > 0:
        return GREATER
    if lead < 0:
        return LESS
    return EQUAL


def sign(p: RatPoly) -> int:
    return lex_compare(p, RatPoly())


def eval_at(p: RatPoly, x0) -> Fraction:
    x0 = parse_rat(x0)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x0 + c
    return acc


def poly_sum(polys: Sequence[RatPoly]) -> RatPoly:
    out = RatPoly()
    for p in polys:
        out = out + p
    return out


def poly_prod(polys: Iterable[RatPoly]) -> RatPoly:
    out = RatPoly([1])
    for p in polys:
        out = out * p
    return out


def positivity_threshold(p: RatPoly) -> Fraction:
    """An M with ``sign(p(x)) == sign(leading)`` for every x > M.

    Uses the Cauchy root bound ``1 + max |c_k / c_n|``.
    """
    if p.degree <= 0:
        return Fraction(0)
    lead = abs(p.leading)
    return 1 + max(abs(c) / lead for c in p.coeffs[:-1])
