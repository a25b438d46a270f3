"""Gap orbits in the set of convergent degrees, and the exact exponent.

Writing Phi for the set of denominator degrees of the convergents of f, a
gap [lo, hi] is a pair of consecutive elements.  Gaps wider than
(deg numer + deg denom) / (power - 1) are "big"; lifting a gap's convergent
through the functional equation and cancelling the common factor C of the
two products sends it to

    lo' = power*lo + deg denom - deg C,   hi' = power*hi - deg numer + deg C,

which is again a big gap of strictly larger size.  A big gap not produced
this way from another big gap is primitive.  The cancellation degrees along
an orbit are eventually periodic, and once a preperiod and period are known
each phase of the orbit has an exact rational limit of hi_n / lo_n; the
irrationality exponent of f(b) is one plus the largest of these limits (or 2
when no big gaps exist at all).

Certification tiers for the periodicity, strongest first:

1. every computed cancellation degree is zero AND a structural witness shows
   no cancellation can ever appear (z-power bookkeeping, cyclotomic index
   reachability, and root-modulus separation for the unity-root-free parts);
2. a repeating window of cancellation data was observed (heuristic: eventual
   periodicity is guaranteed, but no computable bound on the preperiod or
   period exists, so the result carries a caveat);
3. the horizon or the degree cap was exhausted: the result is marked
   uncertified and the computed prefix is preserved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import Poly, poly_gcd
from .contfrac import (
    CfExpansion,
    Convergent,
    cf_expand,
    euclid_cf,
    phi_prefix_of_expansion,
)
from .cyclotomic import PolySplit, cyclo_indices_can_reach, split_unity_roots
from .errors import DegreeCapExceeded, InsufficientPrecision
from .laurent import LaurentSeries, MahlerSystem, solve_mahler

DEFAULT_DEGREE_CAP = 200_000


# ---------------------------------------------------------------------------
# gaps


@dataclass(frozen=True)
class Gap:
    """A gap [lo, hi] between consecutive degrees, carrying the convergent
    whose denominator degree is lo."""

    lo: int
    hi: int
    convergent: Convergent

    @property
    def size(self) -> int:
        return self.hi - self.lo

    def interval(self) -> tuple[int, int]:
        return (self.lo, self.hi)


def big_gap_threshold(system: MahlerSystem) -> Fraction:
    return Fraction(system.numer_deg + system.denom_deg, system.power - 1)


def primitive_size_bound(system: MahlerSystem) -> Fraction:
    """Upper bound on the size of any primitive gap."""
    d = system.power
    return Fraction(2 * d - 1, d - 1) * (system.numer_deg + system.denom_deg)


def find_big_gaps(
    expansion: CfExpansion, system: MahlerSystem, scan_limit: Optional[int] = None
) -> list[Gap]:
    """All big gaps [lo, hi] with lo certified and lo <= scan_limit.

    The hi value of each gap is pinned by the certification of the convergent
    at lo, so the final gap may legitimately reach past the scan limit.
    """
    thr = big_gap_threshold(system)
    convs = [c for c in expansion.convergents if c.index >= 1]
    out: list[Gap] = []
    for cur, nxt in zip(convs, convs[1:]):
        if not cur.certified:
            break
        if scan_limit is not None and cur.degree > scan_limit:
            break
        if Fraction(nxt.degree - cur.degree) > thr:
            out.append(Gap(lo=cur.degree, hi=nxt.degree, convergent=cur))
    return out


def evolve_gap(
    gap: Gap, system: MahlerSystem, degree_cap: int = DEFAULT_DEGREE_CAP
) -> tuple[Gap, int, tuple[int, int]]:
    """Successor gap under the functional-equation lift.

    Returns (successor, cancel_degree, (numer_side, denom_side)).  Because
    numer/denom are coprime and so are the substituted convergent parts, the
    cancelled factor splits as

        gcd(numer * p(z^d), denom * q(z^d))
            = gcd(numer, q(z^d)) * gcd(denom, p(z^d)),

    so only gcds of a small polynomial against a big one are ever computed.
    """
    conv = gap.convergent
    d = system.power
    if conv.den.degree * d + system.denom_deg > degree_cap:
        raise DegreeCapExceeded(
            f"lifted denominator degree {conv.den.degree * d + system.denom_deg} "
            f"exceeds cap {degree_cap}"
        )
    p_sub = conv.num.substitute_power(d)
    q_sub = conv.den.substitute_power(d)
    c_num = poly_gcd(system.numer, q_sub) if system.numer_deg else Poly.one()
    c_den = poly_gcd(system.denom, p_sub) if system.denom_deg else Poly.one()
    cancel = c_num * c_den
    rc = cancel.degree
    num = system.numer * p_sub
    den = system.denom * q_sub
    if rc:
        num = num.divide_exact(cancel)
        den = den.divide_exact(cancel)
    lead = den.lead
    num = num.scale(1 / lead)
    den = den.scale(1 / lead)
    new_lo = d * gap.lo + system.denom_deg - rc
    new_hi = d * gap.hi - system.numer_deg + rc
    if den.degree != new_lo:
        raise AssertionError("successor denominator degree mismatch")
    succ = Gap(
        lo=new_lo,
        hi=new_hi,
        convergent=Convergent(index=-1, num=num, den=den, certified=True),
    )
    if Fraction(gap.size) > big_gap_threshold(system) and succ.size <= gap.size:
        raise AssertionError("successor of a big gap must be strictly larger")
    return succ, rc, (c_num.degree, c_den.degree)


def find_primitive_gaps(big: Sequence[Gap], system: MahlerSystem) -> list[Gap]:
    """Big gaps that are not the successor of any other listed big gap."""
    successors = set()
    for g in big:
        try:
            succ, _, _ = evolve_gap(g, system)
        except DegreeCapExceeded:
            continue
        successors.add(succ.interval())
    return [g for g in big if g.interval() not in successors]


# ---------------------------------------------------------------------------
# root-modulus separation certificates


def _iroot(x: int, n: int) -> int:
    """floor(x ** (1/n)) for x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    if x < 2 or n == 1:
        return x
    r = 1 << -(-x.bit_length() // n)
    while True:
        nxt = ((n - 1) * r + x // r ** (n - 1)) // n
        if nxt >= r:
            break
        r = nxt
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def _nth_root_upper(x: Fraction, n: int, bits: int = 32) -> Fraction:
    """Rational upper bound on x^(1/n), tight to about 2^-bits relative."""
    if x == 0:
        return Fraction(0)
    scaled = x.numerator * x.denominator ** (n - 1) << (n * bits)
    return Fraction(_iroot(scaled, n) + 1, x.denominator << bits)


def _graeffe(p: Poly) -> Poly:
    """Polynomial whose roots are the squares of the roots of p."""
    even = Poly.from_coeffs(p.coeffs[0::2])
    odd = Poly.from_coeffs(p.coeffs[1::2])
    q = even * even - Poly.monomial(1) * odd * odd
    return q.scale(-1) if q.lead < 0 else q


def _powered_root_bounds(p: Poly, graeffe_steps: int = 3) -> tuple[Fraction, Fraction]:
    """(L, U) with L <= |root|^(2^g) <= U for every root of p.

    Requires deg p >= 1 and p(0) != 0; bounds are Fujiwara's applied to the
    Graeffe iterate and to its reversal.
    """
    if p.degree < 1 or p.coeff(0) == 0:
        raise ValueError("need a nonconstant polynomial with nonzero constant term")
    q = p
    for _ in range(graeffe_steps):
        q = _graeffe(q)
    n = q.degree
    upper = 2 * max(
        _nth_root_upper(abs(q.coeff(n - i) / q.lead), i) for i in range(1, n + 1)
    )
    rev = Poly.from_coeffs(tuple(reversed(q.coeffs)))
    inv_lower = 2 * max(
        _nth_root_upper(abs(rev.coeff(n - i) / rev.lead), i) for i in range(1, n + 1)
    )
    return (1 / inv_lower, upper)


def _separation_depth(
    small: Poly, lifted: Poly, power: int, max_depth: int
) -> Optional[int]:
    """Smallest m0 <= max_depth such that for every m >= m0 no root of `small`
    raised to power^m can be a root of `lifted`; None when undecidable here.

    Works when the roots of `small` are certifiably all outside (or all
    inside) the unit circle, so their power^m images escape the modulus range
    of `lifted`'s roots.
    """
    if small.degree < 1 or lifted.degree < 1:
        return 1
    ls, us = _powered_root_bounds(small)
    lt, ut = _powered_root_bounds(lifted)
    if ls > 1:
        val = ls
        for m in range(1, max_depth + 1):
            val = val**power
            if val > ut:
                return m
            if val.numerator.bit_length() > 4_000_000:
                return None
    if us < 1:
        val = us
        for m in range(1, max_depth + 1):
            val = val**power
            if val < lt:
                return m
            if val.denominator.bit_length() > 4_000_000:
                return None
    return None


# ---------------------------------------------------------------------------
# cancellation witness


@dataclass(frozen=True)
class CancellationWitness:
    notes: tuple[str, ...]


def _side_witness(
    label: str,
    small: Poly,
    small_split: PolySplit,
    lift_splits: list[tuple[str, PolySplit]],
    power: int,
    verified_steps: int,
) -> Optional[list[str]]:
    notes = []
    if small.degree == 0:
        return [f"{label}: constant, cancellation impossible"]
    # z-power part
    if small_split.z_power > 0:
        if any(s.z_power > 0 for _, s in lift_splits):
            return None
        notes.append(f"{label}: z-power collision excluded (lifted side has none)")
    # cyclotomic part: can any lifted index ever reach one of ours?
    targets = {k for k, _ in small_split.cyclo}
    sources = {k for _, s in lift_splits for k, _ in s.cyclo}
    if targets:
        if cyclo_indices_can_reach(sources, power, targets):
            return None
        notes.append(
            f"{label}: cyclotomic indices {sorted(targets)} unreachable from "
            f"{sorted(sources)} under index substitution"
        )
    # unity-root-free parts: need modulus separation for each lifted factor
    if small_split.rest.degree >= 1:
        for name, s in lift_splits:
            if s.rest.degree < 1:
                continue
            m0 = _separation_depth(small_split.rest, s.rest, power, verified_steps)
            if m0 is None or m0 > verified_steps:
                return None
            notes.append(
                f"{label}: root moduli of the non-cyclotomic part separate from "
                f"{name} at lift depth {m0} (verified exactly below that)"
            )
    return notes


def cancellation_witness(
    system: MahlerSystem, origin: Gap, verified_steps: int
) -> Optional[CancellationWitness]:
    """Structural proof that the cancellation degree stays zero forever.

    Valid only when every computed cancellation degree over `verified_steps`
    orbit steps was zero: under that hypothesis the orbit numerators and
    denominators are products of lifts of the original data, and it suffices
    to exclude collisions pairwise (z powers, cyclotomic indices, root
    moduli).  Returns None when no such proof is available.
    """
    if verified_steps < 1:
        return None
    a, b = system.numer, system.denom
    p0, q0 = origin.convergent.num, origin.convergent.den
    splits = {id(p): split_unity_roots(p) for p in (a, b, p0, q0)}
    notes: list[str] = []
    for label, small, lifts in (
        ("numer vs lifted denominators", a, [("denom", b), ("q0", q0)]),
        ("denom vs lifted numerators", b, [("numer", a), ("p0", p0)]),
    ):
        side = _side_witness(
            label,
            small,
            splits[id(small)],
            [(n, splits[id(p)]) for n, p in lifts],
            system.power,
            verified_steps,
        )
        if side is None:
            return None
        notes.extend(side)
    return CancellationWitness(notes=tuple(notes))


# ---------------------------------------------------------------------------
# orbits


class OrbitStatus(Enum):
    PERIOD_DETECTED = "period-detected"
    HORIZON_EXHAUSTED = "horizon-exhausted"
    DEGREE_CAPPED = "degree-capped"


@dataclass(frozen=True)
class OrbitStep:
    lo: int
    hi: int
    cancel_deg: Optional[int]  # None on the final recorded state
    cancel_split: Optional[tuple[int, int]]


@dataclass(frozen=True)
class GapOrbit:
    origin: Gap
    steps: tuple[OrbitStep, ...]
    gaps: tuple[Gap, ...]  # full states including convergents
    preperiod: Optional[int]
    period: Optional[int]
    cycle_weight: Optional[int]  # weighted sum of one period of cancel degrees
    lo_drift: Optional[int]
    hi_drift: Optional[int]
    phase_limits: tuple[Fraction, ...]
    status: OrbitStatus
    exact_zero: bool
    witness_notes: tuple[str, ...]

    @property
    def limit(self) -> Optional[Fraction]:
        return max(self.phase_limits) if self.phase_limits else None

    def cancel_degrees(self) -> list[int]:
        return [s.cancel_deg for s in self.steps if s.cancel_deg is not None]


def _detect_period(seq: Sequence, min_window: int) -> Optional[tuple[int, int]]:
    """Smallest (preperiod, period) with the tail periodic and at least
    max(period, min_window) verified repeats."""
    n = len(seq)
    for n0 in range(n):
        for period in range(1, (n - n0) // 2 + 1):
            if (n - n0) - period < max(period, min_window):
                break
            if all(seq[i] == seq[i + period] for i in range(n0, n - period)):
                return (n0, period)
    return None


def run_orbit(
    gap: Gap,
    system: MahlerSystem,
    horizon: int = 8,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    min_window: int = 3,
) -> GapOrbit:
    """Iterate the gap lift, detect periodicity, and compute exact limits."""
    d = system.power
    ra, rb = system.numer_deg, system.denom_deg
    states: list[Gap] = [gap]
    rcs: list[int] = []
    splits: list[tuple[int, int]] = []
    status = OrbitStatus.HORIZON_EXHAUSTED
    for _ in range(horizon):
        try:
            nxt, rc, split = evolve_gap(states[-1], system, degree_cap)
        except DegreeCapExceeded:
            status = OrbitStatus.DEGREE_CAPPED
            break
        if not 0 <= rc <= ra + rb:
            raise AssertionError("cancellation degree out of range")
        states.append(nxt)
        rcs.append(rc)
        splits.append(split)

    witness = None
    if rcs and all(r == 0 for r in rcs):
        witness = cancellation_witness(system, gap, len(rcs))
    found = _detect_period(list(zip(rcs, splits)), min_window)
    if witness is not None:
        found = (0, 1)
    preperiod = period = weight = lo_drift = hi_drift = None
    limits: tuple[Fraction, ...] = ()
    if found is not None:
        status = OrbitStatus.PERIOD_DETECTED
        preperiod, period = found

        def rc_at(j: int) -> int:
            if j < len(rcs):
                return rcs[j]
            return rcs[preperiod + (j - preperiod) % period]

        denom = d**period - 1
        total = denom // (d - 1)  # 1 + d + ... + d^(period-1)
        phase_vals = []
        for i in range(period):
            w = 0
            for j in range(period):
                w = w * d + rc_at(preperiod + i + j)
            l_drift = rb * total - w
            h_drift = ra * total - w
            st = states[preperiod + i]
            phase_vals.append(
                (st.hi - Fraction(h_drift, denom)) / (st.lo + Fraction(l_drift, denom))
            )
            if i == 0:
                weight, lo_drift, hi_drift = w, l_drift, h_drift
        limits = tuple(phase_vals)

    steps = []
    for i, st in enumerate(states):
        has = i < len(rcs)
        steps.append(
            OrbitStep(
                lo=st.lo,
                hi=st.hi,
                cancel_deg=rcs[i] if has else None,
                cancel_split=splits[i] if has else None,
            )
        )
    return GapOrbit(
        origin=gap,
        steps=tuple(steps),
        gaps=tuple(states),
        preperiod=preperiod,
        period=period,
        cycle_weight=weight,
        lo_drift=lo_drift,
        hi_drift=hi_drift,
        phase_limits=limits,
        status=status,
        exact_zero=witness is not None,
        witness_notes=witness.notes if witness else (),
    )


# ---------------------------------------------------------------------------
# pruning and the exponent driver


def evolve_until_hypothesis(gap: Gap, system: MahlerSystem, max_steps: int = 64) -> Gap:
    """Evolve until (power - 1) * lo > deg numer (limits are unchanged)."""
    g = gap
    for _ in range(max_steps):
        if (system.power - 1) * g.lo > system.numer_deg:
            return g
        g, _, _ = evolve_gap(g, system)
    raise AssertionError("hypothesis evolution did not terminate")


def pruning_lo_limit(pivot: Gap, system: MahlerSystem) -> int:
    """Largest lo that another primitive gap may have and still beat the pivot.

    Uses the worst-case primitive size bound for the unseen gap and the
    pivot's exact lower limit; solved over the rationals, so the returned
    integer bound is sharp.
    """
    d = system.power
    ra_adj = Fraction(system.numer_deg, d - 1)
    rb_adj = Fraction(system.denom_deg, d - 1)
    rho0 = (pivot.hi - ra_adj) / (pivot.lo + rb_adj)
    if rho0 <= 1:
        raise AssertionError("pivot must be a big gap")
    bound = primitive_size_bound(system)
    cutoff = (bound + rb_adj + rho0 * ra_adj) / (rho0 - 1)
    if cutoff.denominator == 1:
        return int(cutoff) - 1
    return math.floor(cutoff)


def max_degree_ratio(phi: Sequence[int], drop: int = 1) -> Fraction:
    """Largest ratio of consecutive degrees, ignoring the first `drop` ratios.

    A finite-prefix lower-bound witness for the limsup of the degree ratios;
    the initial ratios are dropped because they reflect the smallest degrees,
    not the tail behavior.
    """
    ratios = [
        Fraction(b, a) for a, b in zip(phi, phi[1:]) if a > 0
    ]
    if len(ratios) <= drop:
        raise ValueError("not enough consecutive degrees")
    return max(ratios[drop:])


@dataclass(frozen=True)
class ExponentConfig:
    initial_scan: int = 32
    horizon: int = 8
    degree_cap: int = DEFAULT_DEGREE_CAP
    start_terms: int = 64
    max_terms: int = 1 << 17
    min_period_window: int = 3
    scan_margin: int = 5


@dataclass(frozen=True)
class PruningInfo:
    best_size: int
    size_bound: Fraction
    lo_limit: int
    phi_scan_limit: int


@dataclass(frozen=True)
class ExponentResult:
    status: str  # "ok" or "rational"
    mu: Optional[Fraction]
    rho: Optional[Fraction]
    certified: bool
    caveats: tuple[str, ...]
    witness: Optional[GapOrbit]
    orbits: tuple[GapOrbit, ...]
    pruning: Optional[PruningInfo]
    phi: tuple[int, ...]
    rational_value: Optional[tuple[Poly, Poly]]

    @property
    def is_rational(self) -> bool:
        return self.status == "rational"


def is_rational_solution(num: Poly, den: Poly, system: MahlerSystem) -> bool:
    """Does num/den solve the functional equation exactly?"""
    d = system.power
    lhs = system.denom * num * den.substitute_power(d)
    rhs = system.numer * den * num.substitute_power(d)
    return lhs == rhs


def certified_expansion(
    system: MahlerSystem, scan: int, cfg: ExponentConfig
) -> tuple[LaurentSeries, CfExpansion, str]:
    """Series + expansion with the degree set complete through `scan`.

    Returns (series, expansion, kind) with kind "ok" or "rational"; precision
    is doubled until the prefix certifies or the term cap is hit.
    """
    terms = max(cfg.start_terms, 2 * scan + 8)
    while terms <= cfg.max_terms:
        f = solve_mahler(system, terms)
        try:
            exp = cf_expand(f, max_denom_degree=scan)
        except InsufficientPrecision:
            terms *= 2
            continue
        if exp.is_rational:
            return f, exp, "rational"
        if exp.rational_suspected:
            cand = exp.rational_candidate
            if (
                cand is not None
                and not cand[0].is_zero
                and is_rational_solution(cand[0], cand[1], system)
            ):
                return f, exp, "rational"
            terms *= 2
            continue
        try:
            phi_prefix_of_expansion(exp, scan)
            return f, exp, "ok"
        except InsufficientPrecision:
            terms *= 2
    raise InsufficientPrecision(
        f"could not certify degrees up to {scan} within {cfg.max_terms} series terms"
    )


def irrationality_exponent(
    system: MahlerSystem, config: Optional[ExponentConfig] = None
) -> ExponentResult:
    """Exact irrationality exponent of f(b), assuming f(b) is irrational.

    Two-pass driver: scan for primitive gaps, pick the pivot (largest size,
    then smallest lo, evolved until the sandwich hypothesis holds), solve the
    pruning inequality exactly, rescan far enough to cover the pruning bound,
    then run every surviving orbit and assemble 1 + max(1, limits).

    Rational f is detected along the way (terminating expansion whose
    candidate solves the functional equation) and reported instead of mu.
    """
    cfg = config or ExponentConfig()
    scan = cfg.initial_scan
    exp: Optional[CfExpansion] = None
    prims: list[Gap] = []
    pivot0: Optional[Gap] = None
    lo_limit = 0
    for _ in range(12):
        f, exp, kind = certified_expansion(system, scan, cfg)
        if kind == "rational":
            cand = exp.rational_candidate
            return ExponentResult(
                status="rational",
                mu=None,
                rho=None,
                certified=True,
                caveats=(),
                witness=None,
                orbits=(),
                pruning=None,
                phi=exp.phi,
                rational_value=cand,
            )
        phi = phi_prefix_of_expansion(exp, scan)
        big = find_big_gaps(exp, system, scan)
        prims = find_primitive_gaps(big, system)
        if not prims:
            return ExponentResult(
                status="ok",
                mu=Fraction(2),
                rho=Fraction(1),
                certified=False,
                caveats=(
                    f"no big gaps up to degree {scan}: the exponent is 2 only if "
                    "none exist at all, which a finite scan cannot prove",
                ),
                witness=None,
                orbits=(),
                pruning=PruningInfo(
                    best_size=0,
                    size_bound=primitive_size_bound(system),
                    lo_limit=0,
                    phi_scan_limit=scan,
                ),
                phi=phi,
                rational_value=None,
            )
        pivot0 = sorted(prims, key=lambda g: (-g.size, g.lo))[0]
        pivot = evolve_until_hypothesis(pivot0, system)
        lo_limit = pruning_lo_limit(pivot, system)
        need = lo_limit + math.ceil(primitive_size_bound(system)) + cfg.scan_margin
        if need <= scan:
            break
        scan = need
    else:
        raise InsufficientPrecision("pruning bound did not stabilize")

    candidates = [g for g in prims if g.lo <= lo_limit]
    caveats: list[str] = []
    certified = True
    orbits = tuple(
        run_orbit(g, system, cfg.horizon, cfg.degree_cap, cfg.min_period_window)
        for g in candidates
    )
    limits: list[tuple[Fraction, GapOrbit]] = []
    for orbit in orbits:
        if orbit.status is OrbitStatus.PERIOD_DETECTED:
            for val in orbit.phase_limits:
                limits.append((val, orbit))
            if not orbit.exact_zero:
                caveats.append(
                    f"orbit of [{orbit.origin.lo},{orbit.origin.hi}]: period "
                    f"(preperiod {orbit.preperiod}, length {orbit.period}) detected "
                    "from a repeating window; no computable a-priori bound exists"
                )
        else:
            certified = False
            last = orbit.steps[-1]
            limits.append((Fraction(last.hi, last.lo), orbit))
            caveats.append(
                f"orbit of [{orbit.origin.lo},{orbit.origin.hi}] {orbit.status.value} "
                "before periodicity was established; limit uses the last computed state"
            )
    rho = max(v for v, _ in limits)
    witness_orbit = max(limits, key=lambda t: t[0])[1]
    mu = 1 + max(Fraction(1), rho)
    pruning = PruningInfo(
        best_size=pivot0.size,
        size_bound=primitive_size_bound(system),
        lo_limit=lo_limit,
        phi_scan_limit=scan,
    )
    return ExponentResult(
        status="ok",
        mu=mu,
        rho=rho,
        certified=certified,
        caveats=tuple(caveats),
        witness=witness_orbit,
        orbits=orbits,
        pruning=pruning,
        phi=phi_prefix_of_expansion(exp, scan),
        rational_value=None,
    )
