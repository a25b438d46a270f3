"""Truncated Laurent series in z^{-1} and the functional-equation solver.

A `MahlerSystem` bundles the data (numer, denom, power, point) of the
functional equation

    f(z) = numer(z) / denom(z) * f(z^power),        |point| >= 2 optional.

With f normalized to leading coefficient 1 and written as
f = z^top * sum_i c_i z^{-i}, matching coefficients on both sides of
denom(z) * f(z) = numer(z) * f(z^power) gives a well-founded recursion for
the c_i: the substituted series only touches indices (i - t) / power < i, so
each coefficient is determined by earlier ones.  Matching the leading terms
forces the two existence conditions (equal leading coefficients, and
power - 1 dividing deg denom - deg numer); violations raise
`NoLaurentSolution`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Poly, poly_gcd, rat_to_str
from .errors import DegenerateSystem, HypothesisViolated, NoLaurentSolution


def _root_magnitude_cap(p: Poly) -> Fraction:
    """Cauchy bound: every root of p has modulus <= 1 + max |a_i / a_n|."""
    if p.degree <= 0:
        return Fraction(0)
    m = max(abs(c / p.lead) for c in p.coeffs[:-1])
    return 1 + m


@dataclass(frozen=True)
class MahlerSystem:
    """Input tuple of the functional equation, with derived constants.

    numer and denom are reduced to coprime form on construction (dividing out
    a common factor leaves the rational function, and hence f, unchanged).
    When a point b is supplied, the nonvanishing of numer(b^{power^m}) and
    denom(b^{power^m}) is verified for every m: beyond the Cauchy root bound
    the values cannot vanish, so the check is finite yet complete.
    """

    numer: Poly
    denom: Poly
    power: int
    point: Optional[int] = None

    def __post_init__(self):
        if self.numer.is_zero or self.denom.is_zero:
            raise DegenerateSystem("numerator and denominator must be nonzero")
        if self.power < 2:
            raise ValueError("power must be >= 2")
        g = poly_gcd(self.numer, self.denom)
        if g.degree > 0:
            object.__setattr__(self, "numer", self.numer.divide_exact(g))
            object.__setattr__(self, "denom", self.denom.divide_exact(g))
        if self.point is not None:
            if abs(self.point) < 2:
                raise ValueError("evaluation point must satisfy |b| >= 2")
            self._verify_nonvanishing()

    def _verify_nonvanishing(self):
        cap = max(_root_magnitude_cap(self.numer), _root_magnitude_cap(self.denom))
        m = 0
        x = self.point
        while abs(x) <= cap:
            if self.numer.eval_at(x) == 0 or self.denom.eval_at(x) == 0:
                raise HypothesisViolated(
                    f"numer or denom vanishes at b^(power^{m}) = {x}"
                )
            m += 1
            x = self.point ** (self.power**m)

    # -- derived constants -------------------------------------------------

    @property
    def numer_deg(self) -> int:
        return self.numer.degree

    @property
    def denom_deg(self) -> int:
        return self.denom.degree

    @property
    def lead_numer(self) -> Fraction:
        return self.numer.lead

    @property
    def lead_denom(self) -> Fraction:
        return self.denom.lead

    @property
    def has_laurent_solution(self) -> bool:
        return (
            self.lead_numer == self.lead_denom
            and (self.denom_deg - self.numer_deg) % (self.power - 1) == 0
        )

    @property
    def top_exponent(self) -> int:
        """Exponent of the leading term of f."""
        if not self.has_laurent_solution:
            raise NoLaurentSolution(
                "leading coefficients differ or degree gap is not divisible"
            )
        return (self.denom_deg - self.numer_deg) // (self.power - 1)

    def to_json(self) -> dict:
        out = {"A": self.numer.to_json(), "B": self.denom.to_json(), "d": self.power}
        if self.point is not None:
            out["b"] = self.point
        return out

    @staticmethod
    def from_json(data: dict) -> "MahlerSystem":
        return MahlerSystem(
            numer=Poly.from_json(data["A"]),
            denom=Poly.from_json(data["B"]),
            power=int(data["d"]),
            point=int(data["b"]) if data.get("b") is not None else None,
        )


@dataclass(frozen=True)
class LaurentSeries:
    """sum_i coeffs[i] * z^(top - i); coeffs[0] != 0.

    `exact=True` asserts that every coefficient beyond the stored window is
    zero, i.e. the series is a Laurent polynomial known in full.
    """

    top: int
    coeffs: tuple[Fraction, ...]
    exact: bool = False

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] == 0:
            raise ValueError("series must carry a nonzero leading coefficient")

    @property
    def valid(self) -> int:
        return len(self.coeffs)

    def coeff_at(self, exponent: int) -> Fraction:
        """Coefficient of z^exponent; exponents below the window are unknown."""
        i = self.top - exponent
        if i < 0:
            return Fraction(0)
        if i >= len(self.coeffs):
            if self.exact:
                return Fraction(0)
            raise ValueError("exponent below the validity window")
        return self.coeffs[i]

    def truncate(self, n_terms: int) -> "LaurentSeries":
        if n_terms >= self.valid:
            return self
        return LaurentSeries(self.top, self.coeffs[:n_terms], exact=False)

    # -- arithmetic used by the expansion and certification layers ----------

    def mul_poly(self, p: Poly) -> "LaurentSeries":
        """p(z) * f(z); the count of trustworthy coefficients is preserved.

        For an exact series the window is extended so the product is again
        complete; for a truncation the unknown tail caps the window at the
        same length as the input.
        """
        if p.is_zero:
            raise ValueError("multiplication by zero loses the series")
        n = self.valid
        d = p.degree
        terms = p.nonzero_terms()
        width = n + d if self.exact else n
        out = []
        for i in range(width):
            acc = Fraction(0)
            for j, c in terms:
                k = i - (d - j)
                if 0 <= k < n:
                    acc += c * self.coeffs[k]
            out.append(acc)
        top = self.top + d
        lead = 0
        while lead < len(out) and out[lead] == 0:
            lead += 1
        if lead == len(out):
            raise ValueError("product vanishes through the whole window")
        return LaurentSeries(top - lead, tuple(out[lead:]), exact=self.exact)

    def sub_poly(self, p: Poly) -> Optional["LaurentSeries"]:
        """f - p, or None when the difference vanishes on the whole window."""
        floor = self.top - self.valid + 1
        if self.exact:
            floor = min(floor, 0)
        hi = max(self.top, p.degree)
        vals = []
        for e in range(hi, floor - 1, -1):
            i = self.top - e
            c = self.coeffs[i] if 0 <= i < self.valid else Fraction(0)
            vals.append(c - p.coeff(e))
        lead = 0
        while lead < len(vals) and vals[lead] == 0:
            lead += 1
        if lead == len(vals):
            return None
        return LaurentSeries(hi - lead, tuple(vals[lead:]), exact=self.exact)

    def substitute_power(self, e: int) -> "LaurentSeries":
        """f(z^e); interleaved coefficients are exactly zero."""
        if e < 1:
            raise ValueError("exponent must be >= 1")
        if e == 1:
            return self
        n = self.valid
        out = [Fraction(0)] * ((n - 1) * e + 1)
        for i, c in enumerate(self.coeffs):
            out[i * e] = c
        return LaurentSeries(self.top * e, tuple(out), exact=self.exact)

    def to_json(self) -> dict:
        return {
            "top": self.top,
            "coeffs": [rat_to_str(c) for c in self.coeffs],
            "valid": self.valid,
            "exact": self.exact,
        }


def rational_series(num: Poly, den: Poly, n_terms: int) -> LaurentSeries:
    """Expansion of num/den at infinity, n_terms exact coefficients."""
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        raise ValueError("zero function has no leading term")
    top = num.degree - den.degree
    dn, dd = num.degree, den.degree
    inv = 1 / den.lead
    coeffs: list[Fraction] = []
    for i in range(n_terms):
        acc = num.coeff(dn - i)
        for j in range(1, min(i, dd) + 1):
            acc -= coeffs[i - j] * den.coeff(dd - j)
        coeffs.append(acc * inv)
    lead = 0
    while lead < len(coeffs) and coeffs[lead] == 0:
        lead += 1
    if lead == len(coeffs):
        raise ValueError("function is zero to the requested order")
    return LaurentSeries(top - lead, tuple(coeffs[lead:]), exact=False)


def solve_mahler(system: MahlerSystem, n_terms: int) -> LaurentSeries:
    """Unique solution with leading coefficient 1, n_terms exact coefficients.

    If the computed window ends in a long run of zeros, the finite candidate
    is checked against the functional equation as a polynomial identity; on
    success the series is marked exact (f is a Laurent polynomial).
    The defining-equation residual is verified on the full window before
    returning.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if not system.has_laurent_solution:
        raise NoLaurentSolution(
            "need equal leading coefficients and (power-1) | (deg denom - deg numer)"
        )
    a, b, d = system.numer, system.denom, system.power
    ra, rb = a.degree, b.degree
    beta = b.lead
    c: list[Fraction] = [Fraction(1)]
    for n in range(1, n_terms):
        acc = Fraction(0)
        for t in range(1, min(rb, n) + 1):
            bc = b.coeff(rb - t)
            if bc:
                acc -= bc * c[n - t]
        for t in range(0, min(ra, n) + 1):
            if (n - t) % d == 0:
                ac = a.coeff(ra - t)
                if ac:
                    acc += ac * c[(n - t) // d]
        c.append(acc / beta)
    series = LaurentSeries(system.top_exponent, tuple(c), exact=False)
    series = _try_mark_exact(series, system)
    _check_residual(series, system)
    return series


def _try_mark_exact(series: LaurentSeries, system: MahlerSystem) -> LaurentSeries:
    guard = max(system.numer_deg, system.denom_deg) + system.power
    tail_zeros = 0
    for v in reversed(series.coeffs):
        if v != 0:
            break
        tail_zeros += 1
    if tail_zeros < guard or tail_zeros == 0:
        return series
    head = series.coeffs[: series.valid - tail_zeros]
    lo = series.top - (len(head) - 1)  # lowest exponent of the candidate
    cand = Poly.from_coeffs(reversed(head))  # candidate = cand(z) * z^lo
    lhs = system.denom * cand
    rhs = system.numer * cand.substitute_power(system.power)
    # compare denom*cand*z^lo with numer*cand(z^power)*z^(power*lo)
    gap = (system.power - 1) * lo
    if gap >= 0:
        rhs = rhs * Poly.monomial(gap)
    else:
        lhs = lhs * Poly.monomial(-gap)
    if lhs == rhs:
        return LaurentSeries(series.top, series.coeffs, exact=True)
    return series


def _check_residual(series: LaurentSeries, system: MahlerSystem) -> None:
    """Assert denom*f - numer*f(z^power) vanishes on the common window."""
    lhs = series.mul_poly(system.denom)
    rhs = series.substitute_power(system.power).mul_poly(system.numer)
    if lhs.top != rhs.top:
        raise AssertionError("residual check failed: tops differ")
    floor = max(lhs.top - lhs.valid + 1, rhs.top - rhs.valid + 1)
    for e in range(lhs.top, floor - 1, -1):
        if lhs.coeff_at(e) != rhs.coeff_at(e):
            raise AssertionError(f"residual check failed at exponent {e}")


def eval_with_tail(
    series: LaurentSeries, x: Fraction, tail_bound_exponent: int = 1
) -> tuple[Fraction, Fraction]:
    """Partial sum at x with a heuristic tail radius; NOT rigorous.

    The radius is |x|^(top - valid + 1) * 2^tail_bound_exponent, zero when the
    series is exact.  Rigorous enclosures live in the numeric module.
    """
    if abs(x) < 2:
        raise ValueError("|x| must be >= 2")
    s = Fraction(0)
    for i, c in enumerate(series.coeffs):
        e = series.top - i
        s += c * (Fraction(x) ** e)
    if series.exact:
        return (s, s)
    radius = abs(Fraction(x)) ** (series.top - series.valid + 1)
    radius *= Fraction(2) ** tail_bound_exponent
    return (s - radius, s + radius)
