"""Evaluation of f(b) and the integer approximation family, exactly enclosed.

Everything inexact is kept as an exact rational interval.  The value f(b) is
computed by iterating the functional equation until the argument is
astronomically large, summing the truncated series there, and bounding the
tail geometrically: the coefficient recursion gives |c_n| <= G^n with

    G = max(1, (sum |denom coeffs below the lead| + sum |numer coeffs|) / |lead|),

so for |x| > 2G the dropped tail is at most 2 |x|^top (G/|x|)^N.  Intervals
therefore shrink monotonically as the requested precision grows, and error
magnitudes far below 2^-4096 are still resolved exactly.

The approximation family scales a certified convergent through m lifts:

    q_val = prod_{t<m} denom(b^{power^t}) * den(b^{power^m}),

p_val likewise with numer/num.  Each pair carries the exact enclosure of
|q_val * f(b) - p_val| and the measured local exponent
1 + (-log err)/(log q) after integer reduction of p/q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import Poly
from .contfrac import CfExpansion, Convergent, cf_expand
from .errors import InsufficientPrecision
from .laurent import LaurentSeries, MahlerSystem, solve_mahler


def log2_int(n: int) -> float:
    """log2 for arbitrarily large positive integers."""
    if n <= 0:
        raise ValueError("need a positive integer")
    bl = n.bit_length()
    if bl <= 960:
        return math.log2(n)
    shift = bl - 64
    return math.log2(n >> shift) + shift


def log2_fraction(x: Fraction) -> float:
    if x <= 0:
        raise ValueError("need a positive rational")
    return log2_int(x.numerator) - log2_int(x.denominator)


@dataclass(frozen=True)
class ValueEstimate:
    lo: Fraction
    hi: Fraction
    bits: int
    method: str

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


def coeff_growth_base(system: MahlerSystem) -> Fraction:
    lead = abs(system.denom.lead)
    total = sum(abs(c) for c in system.denom.coeffs[:-1])
    total += sum(abs(c) for c in system.numer.coeffs)
    return max(Fraction(1), total / lead)


def _tail_bound(x: int, top: int, growth: Fraction, n_terms: int) -> Fraction:
    ax = abs(x)
    if growth * 2 > ax:
        raise ValueError("evaluation point too small for the geometric bound")
    ratio = growth / ax
    lead = Fraction(ax) ** top
    return 2 * lead * ratio**n_terms


def mahler_value(system: MahlerSystem, bits: int = 4096) -> ValueEstimate:
    """Exact rational enclosure of f(b), relative width about 2^-(bits+64)."""
    if system.point is None:
        raise ValueError("system carries no evaluation point")
    if not system.has_laurent_solution:
        raise ValueError("system has no Laurent solution to evaluate")
    b, d = system.point, system.power
    growth = coeff_growth_base(system)
    floor = max(Fraction(1 << 64), 4 * growth)
    m_star = 0
    x = b
    while abs(x) < floor:
        m_star += 1
        x = b ** (d**m_star)
    prefactor = Fraction(1)
    for t in range(m_star):
        xt = b ** (d**t)
        prefactor *= Fraction(system.numer.eval_at(xt), 1) / system.denom.eval_at(xt)
    per_term = log2_fraction(Fraction(abs(x)) / growth)
    n_terms = max(4, math.ceil((bits + 67) / per_term) + 2)
    series = solve_mahler(system, n_terms)
    partial = Fraction(0)
    xf = Fraction(x)
    for i, c in enumerate(series.coeffs):
        if c:
            partial += c * xf ** (series.top - i)
    tail = Fraction(0) if series.exact else _tail_bound(x, series.top, growth, n_terms)
    lo, hi = sorted((prefactor * (partial - tail), prefactor * (partial + tail)))
    return ValueEstimate(lo=lo, hi=hi, bits=bits, method="iterate+series")


@dataclass(frozen=True)
class ApproxPair:
    index: int
    depth: int
    q_value: Fraction
    p_value: Fraction
    err_lo: Fraction
    err_hi: Fraction
    local_exponent: Optional[float]
    reduced: bool
    degenerate: bool
    rational_suspected: bool


def lift_values(
    system: MahlerSystem, conv: Convergent, depth: int
) -> tuple[Fraction, Fraction]:
    """(q_value, p_value) of the depth-m lift, evaluated without forming the
    lifted polynomials."""
    b, d = system.point, system.power
    q_val = Fraction(conv.den.eval_at(b ** (d**depth)))
    p_val = Fraction(conv.num.eval_at(b ** (d**depth)))
    for t in range(depth):
        xt = b ** (d**t)
        q_val *= system.denom.eval_at(xt)
        p_val *= system.numer.eval_at(xt)
    return q_val, p_val


_MAX_RESOLVE_BITS = 1 << 16


def approx_pair(
    system: MahlerSystem,
    conv: Convergent,
    depth: int,
    bits: int = 4096,
    next_degree: Optional[int] = None,
) -> ApproxPair:
    """One member of the approximation family with its exact error enclosure.

    The precision is raised automatically until the error interval excludes
    zero; failure to resolve it (the error may be exactly zero) flags the
    pair as rational-suspected.
    """
    if not conv.certified:
        raise ValueError("approximation family needs a certified convergent")
    if system.point is None:
        raise ValueError("system carries no evaluation point")
    b, d = system.point, system.power
    q_val, p_val = lift_values(system, conv, depth)
    if q_val == 0:
        # b^(power^depth) happens to be a root of the lifted denominator
        return ApproxPair(
            index=conv.index,
            depth=depth,
            q_value=q_val,
            p_value=p_val,
            err_lo=abs(p_val),
            err_hi=abs(p_val),
            local_exponent=None,
            reduced=False,
            degenerate=True,
            rational_suspected=False,
        )
    guess = bits
    if next_degree is not None:
        guess = max(
            bits,
            int(d**depth * (next_degree + 1) * (log2_int(abs(b)) + 1)) + 256,
        )
    err_lo = err_hi = None
    rational_suspected = False
    while True:
        fv = mahler_value(system, guess)
        cand = sorted((q_val * fv.lo - p_val, q_val * fv.hi - p_val))
        if cand[0] > 0 or cand[1] < 0:
            err_lo, err_hi = sorted((abs(cand[0]), abs(cand[1])))
            break
        guess *= 2
        if guess > _MAX_RESOLVE_BITS:
            err_lo, err_hi = Fraction(0), max(abs(cand[0]), abs(cand[1]))
            rational_suspected = True
            break
    # integer reduction of p/q
    lcm = (
        q_val.denominator
        * p_val.denominator
        // math.gcd(q_val.denominator, p_val.denominator)
    )
    q_int = abs(int(q_val * lcm))
    p_int = abs(int(p_val * lcm))
    g = math.gcd(q_int, p_int)
    reduced = g > 1
    scale = Fraction(lcm, g)
    q_red = Fraction(q_int, g)
    err_lo_red, err_hi_red = err_lo * scale, err_hi * scale
    degenerate = q_red <= 1 or rational_suspected
    local = None
    if not degenerate and err_hi_red > 0:
        local = 1.0 + (-log2_fraction(err_hi_red)) / log2_fraction(q_red)
    return ApproxPair(
        index=conv.index,
        depth=depth,
        q_value=q_val,
        p_value=p_val,
        err_lo=err_lo_red,
        err_hi=err_hi_red,
        local_exponent=local,
        reduced=reduced,
        degenerate=degenerate,
        rational_suspected=rational_suspected,
    )


@dataclass(frozen=True)
class EmpiricalReport:
    value: Optional[float]
    pairs: tuple[ApproxPair, ...]
    rational_suspected: bool


def expansion_for_convergents(
    system: MahlerSystem, conv_count: int, max_terms: int = 1 << 15
) -> CfExpansion:
    """Expand adaptively until conv_count nontrivial convergents certify."""
    scan = 8
    terms = 64
    while terms <= max_terms:
        series = solve_mahler(system, terms)
        try:
            exp = cf_expand(series, max_denom_degree=scan)
        except InsufficientPrecision:
            terms *= 2
            continue
        good = [c for c in exp.convergents if c.index >= 1 and c.certified]
        if len(good) >= conv_count or exp.is_rational:
            return exp
        if exp.rational_suspected:
            terms *= 2
            continue
        scan *= 2
        terms = max(terms, 2 * scan + 8)
    raise InsufficientPrecision(
        f"could not certify {conv_count} convergents within {max_terms} terms"
    )


def empirical_exponent(
    system: MahlerSystem,
    bits: int = 4096,
    conv_count: int = 5,
    depth_max: int = 6,
    expansion: Optional[CfExpansion] = None,
) -> EmpiricalReport:
    """Measured local exponents over the (convergent, depth) grid.

    The reported value is the largest local exponent among the pairs at the
    deepest lift, where the denominators are astronomically large and the
    measurement tracks the asymptotic exponent; shallow lifts have small
    denominators whose lucky approximations say nothing about the limit (the
    full grid is still returned for inspection).
    """
    exp = expansion or expansion_for_convergents(system, conv_count)
    convs = [c for c in exp.convergents if c.index >= 1 and c.certified]
    convs = convs[:conv_count]
    degrees = {c.index: c.degree for c in exp.convergents}
    pairs = []
    suspected = False
    for conv in convs:
        nxt = degrees.get(conv.index + 1)
        for depth in range(depth_max + 1):
            pair = approx_pair(system, conv, depth, bits=bits, next_degree=nxt)
            pairs.append(pair)
            suspected = suspected or pair.rational_suspected
    deep = [
        p.local_exponent
        for p in pairs
        if p.depth == depth_max and p.local_exponent is not None
    ]
    return EmpiricalReport(
        value=max(deep) if deep else None,
        pairs=tuple(pairs),
        rational_suspected=suspected,
    )


@dataclass(frozen=True)
class RatioCheck:
    index: int
    depths: tuple[int, ...]
    q_ratio_log2: tuple[float, ...]
    err_ratio_log2: tuple[float, ...]
    passed: bool
    vacuous: bool


def growth_ratio_check(
    system: MahlerSystem,
    conv: Convergent,
    next_degree: Optional[int],
    depths: Sequence[int] = tuple(range(1, 7)),
    bits: int = 4096,
    band: float = 1e6,
    drift: float = 0.05,
) -> RatioCheck:
    """Check the predicted growth rates of |q_val| and of the error.

    |q_val| should track |beta|^m |b|^{power^m (deg den + rb/(power-1))} and
    the error |alpha|^m |b|^{power^m (ra/(power-1) - next_degree)} up to
    constants; PASS means both ratio sequences stay inside [1/band, band] and
    the last quarter drifts by less than the given fraction.
    """
    if next_degree is None:
        return RatioCheck(
            index=conv.index,
            depths=(),
            q_ratio_log2=(),
            err_ratio_log2=(),
            passed=True,
            vacuous=True,
        )
    b, d = system.point, system.power
    ra, rb = system.numer_deg, system.denom_deg
    la = log2_fraction(abs(system.numer.lead))
    lb = log2_fraction(abs(system.denom.lead))
    lgb = log2_int(abs(b))
    q_logs = []
    e_logs = []
    for m in depths:
        pair = approx_pair(system, conv, m, bits=bits, next_degree=next_degree)
        q_expected = m * lb + (d**m) * (Fraction(rb, d - 1) + conv.degree) * lgb
        e_expected = m * la + (d**m) * (Fraction(ra, d - 1) - next_degree) * lgb
        q_logs.append(log2_fraction(abs(pair.q_value)) - float(q_expected))
        if pair.err_hi > 0 and not pair.rational_suspected:
            e_logs.append(log2_fraction(pair.err_hi) - float(e_expected))
        else:
            e_logs.append(float("-inf"))
    band_log = math.log2(band)
    ok = all(abs(v) <= band_log for v in q_logs) and all(
        abs(v) <= band_log for v in e_logs if v != float("-inf")
    )
    quarter = max(1, len(depths) // 4)
    drift_log = math.log2(1 + drift)
    for logs in (q_logs, e_logs):
        tailvals = [v for v in logs[-quarter - 1 :] if v != float("-inf")]
        if len(tailvals) >= 2:
            ok = ok and (max(tailvals) - min(tailvals) <= drift_log)
    return RatioCheck(
        index=conv.index,
        depths=tuple(depths),
        q_ratio_log2=tuple(q_logs),
        err_ratio_log2=tuple(e_logs),
        passed=ok,
        vacuous=False,
    )


def remainder_route(
    system: MahlerSystem,
    series: LaurentSeries,
    conv: Convergent,
    depth: int,
) -> tuple[Fraction, Fraction]:
    """Enclosure of q_val*f(b) - p_val via the lifted remainder series.

    Independent of the product route in approx_pair: the identity says the
    difference equals prod_{t<m} numer(b^{power^t}) times the remainder
    series of the convergent evaluated at b^{-power^m}.
    """
    b, d = system.point, system.power
    rem = series.mul_poly(conv.den).sub_poly(conv.num)
    if rem is None:
        raise InsufficientPrecision("remainder vanishes through the window")
    u_val = Fraction(1)
    for t in range(depth):
        u_val *= Fraction(system.numer.eval_at(b ** (d**t)))
    x = Fraction(b ** (d**depth))
    partial = Fraction(0)
    for i, c in enumerate(rem.coeffs):
        expo = rem.top - i  # negative
        if c:
            partial += c * x**expo
    growth = coeff_growth_base(system)
    # |rem coeff at z^e| <= (sum_j |den_j| G^j) * G^(top(f) - e)
    den_weight = sum(abs(c) * growth**j for j, c in conv.den.nonzero_terms())
    first_unknown = -(rem.top - rem.valid)  # smallest unknown |exponent|
    scale = den_weight * growth ** (series.top + first_unknown)
    ratio = growth / abs(x)
    if 2 * ratio >= 1:
        raise ValueError("evaluation point too small for the tail bound")
    tail = 2 * scale * abs(x) ** (-first_unknown)
    lo, hi = sorted((u_val * (partial - tail), u_val * (partial + tail)))
    return lo, hi
