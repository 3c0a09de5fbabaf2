"""Exact univariate polynomials and rational functions over the rationals.

Coefficients are :class:`fractions.Fraction`; nothing here touches floating
point.  These back the replica-index dependence of the expansion
coefficients, so that the limit ``n -> 1`` is literal substitution.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Union

Number = Union[int, Fraction]


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Polynomial:
    """Polynomial in one variable, coefficients stored lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @classmethod
    def constant(cls, c: Number) -> Polynomial:
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> Polynomial:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        exact = isinstance(x, (int, Fraction))
        acc = Fraction(0) if exact else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if exact else float(c))
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other) -> Polynomial:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other) -> Polynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> Polynomial:
        return _as_poly(other) - self

    def __mul__(self, other) -> Polynomial:
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - other.degree, 0)
        lead = other.leading
        while len(rem) - 1 >= other.degree and rem:
            shift = len(rem) - 1 - other.degree
            factor = rem[-1] / lead
            quot[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[i + shift] -= factor * c
            rem = list(_trim(rem))
        return Polynomial(quot), Polynomial(rem)

    def compose(self, inner: Polynomial) -> Polynomial:
        """Return ``self(inner(x))``."""
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        return Polynomial(c / self.leading for c in self.coeffs)

    def content_denominator(self) -> int:
        """Least common multiple of coefficient denominators."""
        return lcm(1, *(c.denominator for c in self.coeffs))

    def content_numerator(self) -> int:
        return gcd(0, *(c.numerator for c in self.coeffs))

    def format(self, var: str = "n") -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({self.format()})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.constant(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Polynomial")


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (Euclid over Q)."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic() if not a.is_zero() else Polynomial.constant(1)


class RationalFunction:
    """Ratio of two polynomials, kept in lowest terms.

    The canonical form has integer coefficients in both numerator and
    denominator, no common polynomial factor, coefficient content 1 across the
    pair, and a positive leading coefficient in the denominator.  Two equal
    functions therefore compare equal structurally as well.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial | Number, den: Polynomial | Number = 1):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Polynomial(), Polynomial.constant(1)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        scale = Fraction(lcm(num.content_denominator(), den.content_denominator()))
        num, den = num * scale, den * scale
        content = gcd(num.content_numerator(), den.content_numerator())
        if den.leading < 0:
            content = -content
        self.num = num * Fraction(1, content)
        self.den = den * Fraction(1, content)

    @classmethod
    def zero(cls) -> RationalFunction:
        return cls(0)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __call__(self, x):
        """Evaluate at ``x``; exact for int/Fraction, float otherwise."""
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {x}")
        if isinstance(x, (int, Fraction)):
            return Fraction(self.num(x)) / Fraction(d)
        return self.num(x) / d

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __add__(self, other) -> RationalFunction:
        other = _as_ratfunc(other)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other) -> RationalFunction:
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other) -> RationalFunction:
        return _as_ratfunc(other) - self

    def __mul__(self, other) -> RationalFunction:
        other = _as_ratfunc(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        other = _as_ratfunc(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def format(self, var: str = "n") -> str:
        num = self.num.format(var)
        if self.den == Polynomial.constant(1):
            return num
        return f"({num})/({self.den.format(var)})"

    def __repr__(self) -> str:
        return f"RationalFunction({self.format()})"


def _as_ratfunc(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction(x)

