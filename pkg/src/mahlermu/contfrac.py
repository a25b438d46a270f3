"""Continued fractions of truncated Laurent series, with certification.

The expansion treats the truncation sum_{i<N} c_i z^(top-i) as the rational
function P(z) / z^(N-1-top) and runs the Euclidean algorithm on that pair.
The classical block structure of Pade tables gives the certification rule: a
computed convergent pair (p_k, q_k) provably equals the true convergent of
the full series whenever

    deg q_k + deg q_{k+1} <= valid - (top + 1),

because q_k f - p_k cancels down to z^(-deg q_{k+1}) and that many
coefficients pin the pair down.  (For the canonical top = -1 this is the
familiar d_k + d_{k+1} <= N.)

The Euclid loop keeps each working remainder as a primitive integer-
coefficient polynomial together with an exact rational scale, reconstructing
the true quotients from pseudo-division; this controls coefficient growth at
window sizes of several hundred.

Hitting a zero remainder means the *truncation* is a rational function.  Only
an input marked `exact` lets us conclude that f itself is rational; otherwise
the final huge partial quotient is a truncation artifact, the expansion is
flagged `rational_suspected`, and the previous convergent is exposed as the
candidate value for the caller to certify by other means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import Poly, _int_primitive, _int_trim
from .errors import InsufficientPrecision
from .laurent import LaurentSeries


@dataclass(frozen=True)
class Convergent:
    """One convergent num/den with den monic, gcd(num, den) = 1."""

    index: int
    num: Poly
    den: Poly
    certified: bool

    @property
    def degree(self) -> int:
        return self.den.degree


@dataclass(frozen=True)
class CfExpansion:
    quotients: tuple[Poly, ...]
    convergents: tuple[Convergent, ...]
    horizon: int  # series coefficients consumed
    is_rational: bool  # exact input and the expansion terminated
    rational_suspected: bool  # truncated input terminated: artifact likely
    rational_candidate: Optional[tuple[Poly, Poly]]

    @property
    def phi(self) -> tuple[int, ...]:
        """Certified denominator degrees (index >= 1), ascending."""
        return tuple(
            c.degree for c in self.convergents if c.index >= 1 and c.certified
        )

    @property
    def degrees_observed(self) -> tuple[int, ...]:
        return tuple(c.degree for c in self.convergents if c.index >= 1)

    def convergent_by_degree(self, degree: int) -> Convergent:
        for c in self.convergents:
            if c.degree == degree and c.index >= 1:
                return c
        raise KeyError(f"no convergent with denominator degree {degree}")


def _pseudo_quotient(rp, sp, rc, sc):
    """True quotient and remainder of (sp * rp) / (sc * rc).

    rp, rc are primitive int polynomials (ascending lists), sp, sc exact
    scales.  Returns (quotient Poly, new int poly, new scale).
    """
    delta = len(rp) - len(rc)
    lb = rc[-1]
    work = list(rp)
    qint = [0] * (delta + 1)
    # fraction-free division: after the loop, work = lb^(delta+1) * rp mod rc
    # and qint satisfies lb^(delta+1) * rp = qint * rc + work
    for k in range(delta, -1, -1):
        top = work[k + len(rc) - 1]
        for i in range(len(work)):
            work[i] *= lb
        qint = [c * lb for c in qint]
        qint[k] = top
        if top:
            for j, bj in enumerate(rc):
                work[k + j] -= top * bj
    _int_trim(work)
    denom = lb ** (delta + 1)
    quot = Poly.from_coeffs([Fraction(c) for c in qint]).scale(sp / (sc * denom))
    if not work:
        return quot, [], Fraction(0)
    g = 0
    for c in work:
        g = math.gcd(g, c)
    new_int = [c // g for c in work]
    new_scale = sp * Fraction(g, denom)
    return quot, new_int, new_scale


def _euclid_steps(p_int, q_int, max_denom_degree):
    """Quotients of the CF of p_int/q_int, stopping past max_denom_degree.

    Yields (quotient Poly, remainder_is_zero) and stops after the cumulative
    denominator degree exceeds max_denom_degree (one extra convergent past the
    limit is produced so callers can see the next element).
    """
    a = (_int_primitive(list(p_int)), Fraction(1))
    b = (_int_primitive(list(q_int)), Fraction(1))
    quotients = []
    if len(a[0]) < len(b[0]):
        quotients.append((Poly.zero(), False))
        a, b = b, a
    denom_degree = 0
    while True:
        quot, rem_int, rem_scale = _pseudo_quotient(a[0], a[1], b[0], b[1])
        if quotients:
            denom_degree += quot.degree
        terminated = not rem_int
        quotients.append((quot, terminated))
        if terminated or denom_degree > max_denom_degree:
            break
        a, b = b, (rem_int, rem_scale)
    return quotients


def cf_expand(series: LaurentSeries, max_denom_degree: int) -> CfExpansion:
    """Expand a (possibly truncated) Laurent series into its continued fraction.

    Raises InsufficientPrecision when not even the first nontrivial convergent
    certifies.
    """
    if max_denom_degree < 1:
        raise ValueError("max_denom_degree must be >= 1")
    n = series.valid
    top = series.top
    budget = n - (top + 1)
    # scale to integers: expand lam * f; convergent numerators are scaled back
    lam = 1
    for c in series.coeffs:
        lam = lam * c.denominator // math.gcd(lam, c.denominator)
    p_int = [int(series.coeffs[n - 1 - i] * lam) for i in range(n)]
    _int_trim(p_int)
    q_int = [0] * (n - 1 - top) + [1]

    # no convergent past budget/2 can certify, and beyond the information
    # content of the truncation the quotients are pure noise with exploding
    # coefficients, so never expand into that zone
    stop_degree = min(max_denom_degree, max(1, budget // 2))
    raw = _euclid_steps(p_int, q_int, stop_degree)
    terminated = raw[-1][1]

    quotients: list[Poly] = []
    pairs: list[tuple[Poly, Poly]] = []
    p_prev, q_prev = Poly.zero(), Poly.one()
    p_cur, q_cur = Poly.one(), Poly.zero()
    for k, (quot, _) in enumerate(raw):
        # undo the lam scaling of the input: quotients alternate *1/lam, *lam
        q_adj = quot.scale(Fraction(1, lam) if k % 2 == 0 else Fraction(lam))
        quotients.append(q_adj)
        p_new = q_adj * p_cur + p_prev
        q_new = q_adj * q_cur + q_prev
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_new, q_new
        lead = q_new.lead
        pairs.append((p_new.scale(1 / lead), q_new.scale(1 / lead)))

    degrees = [q.degree for _, q in pairs]
    exact_all = bool(series.exact and terminated)
    convergents: list[Convergent] = []
    for k, (p, q) in enumerate(pairs):
        certified = exact_all or (
            k + 1 < len(pairs) and degrees[k] + degrees[k + 1] <= budget
        )
        convergents.append(Convergent(index=k, num=p, den=q, certified=certified))

    is_rational = bool(series.exact and terminated)
    rational_suspected = bool(terminated and not series.exact)
    candidate = None
    if is_rational:
        candidate = pairs[-1]
    elif rational_suspected and len(pairs) >= 2:
        candidate = pairs[-2]

    if (
        not is_rational
        and not rational_suspected
        and not any(c.certified for c in convergents if c.index >= 1)
    ):
        raise InsufficientPrecision(
            "no nontrivial convergent certifies at this series precision"
        )
    return CfExpansion(
        quotients=tuple(quotients),
        convergents=tuple(convergents),
        horizon=n,
        is_rational=is_rational,
        rational_suspected=rational_suspected,
        rational_candidate=candidate,
    )


def remainder_top_degree(
    series: LaurentSeries, conv: Convergent
) -> tuple[int, Fraction]:
    """(next degree, leading coefficient) of den*f - num.

    For a certified convergent the remainder's top exponent is exactly the
    negated next denominator degree; it always falls inside the computable
    window.
    """
    if not conv.certified:
        raise ValueError("remainder degree requires a certified convergent")
    rem = series.mul_poly(conv.den).sub_poly(conv.num)
    if rem is None:
        raise InsufficientPrecision("remainder vanishes through the window")
    return -rem.top, rem.coeffs[0]


def phi_prefix(series: LaurentSeries, up_to_degree: int) -> tuple[int, ...]:
    """Certified prefix of the degree set, complete through up_to_degree.

    Every element of {deg q_k} up to the limit is present; the element
    following the last in-range one must be observable, otherwise the
    completeness guarantee fails and InsufficientPrecision is raised.
    """
    exp = cf_expand(series, max_denom_degree=up_to_degree)
    return phi_prefix_of_expansion(exp, up_to_degree)


def phi_prefix_of_expansion(exp: CfExpansion, up_to_degree: int) -> tuple[int, ...]:
    if exp.is_rational:
        return tuple(d for d in exp.degrees_observed if d <= up_to_degree)
    in_range: list[int] = []
    last_certified = False
    for conv in exp.convergents:
        if conv.index == 0:
            last_certified = conv.certified
            continue
        if conv.degree > up_to_degree:
            # the boundary value is pinned by certification of its predecessor
            if not last_certified:
                raise InsufficientPrecision(
                    f"first degree beyond {up_to_degree} is not pinned down"
                )
            return tuple(in_range)
        if not conv.certified:
            raise InsufficientPrecision(
                f"degree {conv.degree} not certified; completeness up to "
                f"{up_to_degree} cannot be guaranteed"
            )
        in_range.append(conv.degree)
        last_certified = True
    # ran out of convergents before passing the limit
    raise InsufficientPrecision(
        f"expansion ends below degree {up_to_degree}; cannot rule out further elements"
    )


def euclid_cf(num: Poly, den: Poly) -> CfExpansion:
    """Exact continued fraction of a rational function num/den.

    Every convergent is certified and is_rational is True; this is the exact
    counterpart used for finite inputs and for oracle comparisons.
    """
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    quotients: list[Poly] = []
    pairs: list[tuple[Poly, Poly]] = []
    p_prev, q_prev = Poly.zero(), Poly.one()
    p_cur, q_cur = Poly.one(), Poly.zero()
    a, b = num, den
    while True:
        quot, rem = divmod(a, b)
        quotients.append(quot)
        p_new = quot * p_cur + p_prev
        q_new = quot * q_cur + q_prev
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_new, q_new
        lead = q_new.lead
        pairs.append((p_new.scale(1 / lead), q_new.scale(1 / lead)))
        if rem.is_zero:
            break
        a, b = b, rem
    convergents = tuple(
        Convergent(index=k, num=p, den=q, certified=True)
        for k, (p, q) in enumerate(pairs)
    )
    return CfExpansion(
        quotients=tuple(quotients),
        convergents=convergents,
        horizon=0,
        is_rational=True,
        rational_suspected=False,
        rational_candidate=pairs[-1],
    )
