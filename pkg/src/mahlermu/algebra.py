"""Dense univariate polynomials over the exact rationals.

A polynomial is stored as a tuple of `fractions.Fraction` coefficients in
ascending order of powers with no trailing zeros; the zero polynomial is the
empty tuple.  Everything here is pure and exact: values are immutable after
construction and safe to share between threads.

The GCD runs a primitive-part integer remainder sequence (pseudo-division
followed by content stripping), which keeps intermediate coefficients small
even when the inputs have degrees in the tens of thousands.  When one operand
has very small degree the first reduction is done with plain rational
division instead, so gcd(small, huge) costs O(deg_huge * deg_small).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
CoeffLike = Union[int, Fraction]

# Degree below which a gcd operand is reduced by plain rational division
# instead of pseudo-division (avoids the O(n^2) scaling of prem by a huge
# dividend against a tiny divisor).
_SMALL_GCD_DEGREE = 32


def rat_from_str(text: Union[str, int]) -> Fraction:
    """Parse "num/den" or "num" (ints are accepted as-is)."""
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(text.strip())


def rat_to_str(value: Fraction) -> str:
    """Render exactly, omitting the denominator when it is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


@dataclass(frozen=True)
class Poly:
    """Immutable dense polynomial over Q, ascending coefficients."""

    coeffs: tuple[Fraction, ...]

    # -- construction -----------------------------------------------------

    @staticmethod
    def of(*coeffs: CoeffLike) -> "Poly":
        return Poly(_trim([Fraction(c) for c in coeffs]))

    @staticmethod
    def from_coeffs(coeffs: Iterable[CoeffLike]) -> "Poly":
        return Poly(_trim([Fraction(c) for c in coeffs]))

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def one() -> "Poly":
        return Poly((Fraction(1),))

    @staticmethod
    def monomial(power: int, coeff: CoeffLike = 1) -> "Poly":
        c = Fraction(coeff)
        if c == 0:
            return Poly(())
        return Poly(tuple([Fraction(0)] * power) + (c,))

    # -- queries -----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    def nonzero_terms(self) -> list[tuple[int, Fraction]]:
        return [(i, c) for i, c in enumerate(self.coeffs) if c != 0]

    def z_power(self) -> int:
        """Multiplicity of the root z = 0 (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return 0

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(_trim(out))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly(())
        a, b = self.nonzero_terms(), other.nonzero_terms()
        # iterate over the operand with fewer nonzero entries; substituted
        # polynomials p(z^e) are mostly zeros and this skips the zero runs
        if len(a) > len(b):
            a, b = b, a
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, c in a:
            for j, d in b:
                out[i + j] += c * d
        return Poly(_trim(out))

    def scale(self, factor: CoeffLike) -> "Poly":
        f = Fraction(factor)
        if f == 0:
            return Poly(())
        return Poly(tuple(c * f for c in self.coeffs))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.degree < other.degree:
            return Poly(()), self
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        quot = [Fraction(0)] * (dq + 1)
        inv_lead = 1 / other.lead
        div_terms = other.nonzero_terms()
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv_lead
            if c == 0:
                continue
            quot[k] = c
            for j, d in div_terms:
                rem[k + j] -= c * d
        return Poly(_trim(quot)), Poly(_trim(rem[: other.degree]))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def divide_exact(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero or self.lead == 1:
            return self
        return self.scale(1 / self.lead)

    # -- structure ----------------------------------------------------------

    def substitute_power(self, exponent: int) -> "Poly":
        """Return p(z^exponent), stored densely."""
        if exponent < 1:
            raise ValueError("exponent must be >= 1")
        if self.is_zero or exponent == 1:
            return self
        out = [Fraction(0)] * (self.degree * exponent + 1)
        for i, c in enumerate(self.coeffs):
            if c != 0:
                out[i * exponent] = c
        return Poly(tuple(out))

    def eval_at(self, x: CoeffLike) -> Fraction:
        """Horner evaluation; exact for integer or rational x."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def int_coeffs(self) -> tuple[list[int], Fraction]:
        """Return (ints, scale) with self = scale * Poly(ints), ints primitive."""
        if self.is_zero:
            return [], Fraction(1)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        return ints, Fraction(g, den)

    # -- serialization / display ---------------------------------------------

    def to_json(self) -> list[str]:
        return [rat_to_str(c) for c in self.coeffs]

    @staticmethod
    def from_json(data: Iterable[Union[str, int]]) -> "Poly":
        return Poly(_trim([rat_from_str(c) for c in data]))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if parts else "")
            mag = abs(c)
            var = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            body = rat_to_str(mag) if (mag != 1 or i == 0) else ""
            parts.append(f"{sign} {body}{var}".strip() if parts else f"{sign}{body}{var}")
        return " ".join(parts)


# -- integer-level helpers (no Fractions inside the loops) --------------------


def _int_trim(v: list[int]) -> list[int]:
    while v and v[-1] == 0:
        v.pop()
    return v


def _int_content(v: Sequence[int]) -> int:
    g = 0
    for c in v:
        g = math.gcd(g, c)
    return g


def _int_primitive(v: list[int]) -> list[int]:
    g = _int_content(v)
    if g > 1:
        v = [c // g for c in v]
    return v


def _int_rem_small(huge: list[int], small: list[int]) -> list[Fraction]:
    """huge mod small with rational arithmetic; cheap when small has low degree."""
    rem = [Fraction(c) for c in huge]
    ds = len(small) - 1
    inv = Fraction(1, small[-1])
    terms = [(j, c) for j, c in enumerate(small[:-1]) if c != 0]
    for k in range(len(rem) - 1 - ds, -1, -1):
        c = rem[k + ds] * inv
        if c == 0:
            continue
        rem[k + ds] = Fraction(0)
        for j, d in terms:
            rem[k + j] -= c * d
    out = rem[:ds]
    while out and out[-1] == 0:
        out.pop()
    return out


def _int_pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Remainder of a by b over Z, correct up to a nonzero scalar factor.

    Each step computes lb*rem - lc(rem)*z^k*b, which kills the leading term;
    the accumulated powers of lb are irrelevant because callers strip content.
    """
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(rem) - 1 >= db and rem:
        k = len(rem) - 1 - db
        top = rem.pop()
        for i in range(len(rem)):
            rem[i] *= lb
        for j in range(db):
            if b[j]:
                rem[k + j] -= top * b[j]
        _int_trim(rem)
    return rem


def _frac_to_int_poly(coeffs: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return _int_primitive([int(c * den) for c in coeffs])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor, exact.

    Primitive-part integer remainder sequence; once the working pair is small
    the loop is plain pseudo-division plus content stripping.
    """
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    x = _frac_to_int_poly(a.coeffs)
    y = _frac_to_int_poly(b.coeffs)
    if len(x) < len(y):
        x, y = y, x
    while y:
        if len(y) - 1 <= _SMALL_GCD_DEGREE < len(x) - 1:
            r = _frac_to_int_poly(_int_rem_small(x, y))
        else:
            r = _int_primitive(_int_pseudo_rem(x, y))
        x, y = y, r
    lead = Fraction(x[-1])
    return Poly(tuple(Fraction(c) / lead for c in x))


def poly_lcm_denominator(polys: Iterable[Poly]) -> int:
    """lcm of all coefficient denominators across the given polynomials."""
    den = 1
    for p in polys:
        for c in p.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
    return den
