"""Cyclotomic polynomials and the arithmetic around index substitution.

The key structural facts used elsewhere in the package:

* Phi_n(z^d) is a product of cyclotomic polynomials; writing r = r(d, n) for
  the largest divisor of d coprime to n and s = d / r, the factor indices are
  exactly {t * n * s : t | r}, each appearing once.
* Every cyclotomic divisor Phi_k of Phi_n(z^{d^m}) satisfies r(k, d) = r(n, d),
  so index-reachability questions decompose by that invariant.

Indices are capped at 10**5; fixtures never get near that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Poly
from .errors import SearchCapExceeded

INDEX_CAP = 100_000


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine for n <= INDEX_CAP."""
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def rad(n: int) -> int:
    """Product of the distinct primes of n; rad(1) = 1."""
    r = 1
    for p in factorize(n):
        r *= p
    return r


def euler_phi(n: int) -> int:
    phi = n
    for p in factorize(n):
        phi = phi // p * (p - 1)
    return phi


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


@dataclass(frozen=True)
class CoprimeSplit:
    """n = r * s with r the largest divisor of n coprime to m."""

    n: int
    m: int
    r: int
    s: int


def coprime_split(n: int, m: int) -> CoprimeSplit:
    if n < 1 or m < 1:
        raise ValueError("both arguments must be positive")
    r = n
    while True:
        g = math.gcd(r, m)
        if g == 1:
            break
        r //= g
    return CoprimeSplit(n=n, m=m, r=r, s=n // r)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> Poly:
    """Phi_n via the Moebius product of (z^{n/d} - 1) factors."""
    if n < 1:
        raise ValueError("index must be positive")
    if n > INDEX_CAP:
        raise SearchCapExceeded(f"cyclotomic index {n} exceeds cap {INDEX_CAP}")
    if n == 1:
        return Poly.of(-1, 1)
    num = Poly.one()
    dens: list[Poly] = []
    for d in divisors(rad(n)):
        mu = (-1) ** len(factorize(d)) if d > 1 else 1
        term = Poly.monomial(n // d, 1) - Poly.one()
        if mu == 1:
            num = num * term
        else:
            dens.append(term)
    for term in dens:
        num = num.divide_exact(term)
    return num


def decompose_cyclo_power(n: int, d: int) -> list[int]:
    """Indices k with Phi_n(z^d) = prod_k Phi_k(z), each factor once."""
    if n < 1 or d < 1:
        raise ValueError("both arguments must be positive")
    split = coprime_split(d, n)
    return sorted(t * n * split.s for t in divisors(split.r))


def cyclo_multiplicity(index: int, poly: Poly) -> int:
    """Largest e with Phi_index^e dividing poly."""
    if poly.is_zero:
        raise ValueError("zero polynomial")
    phi = cyclotomic_poly(index)
    count = 0
    cur = poly
    while cur.degree >= phi.degree:
        q, r = divmod(cur, phi)
        if not r.is_zero:
            break
        cur = q
        count += 1
    return count


def reach_depth(n: int, d: int, cap: int = 64) -> int:
    """Smallest m with Phi_n dividing Phi_r(z^{d^m}), r = r(n, d).

    Existence is guaranteed; the cap only guards against runaway input.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    r = coprime_split(n, d).r
    frontier = {r}
    for depth in range(cap + 1):
        if n in frontier:
            return depth
        frontier = {k for f in frontier for k in decompose_cyclo_power(f, d) if k <= n}
    raise SearchCapExceeded(f"no reach within {cap} substitution levels")


def cyclo_index_candidates(degree: int, cap: int = INDEX_CAP) -> list[int]:
    """All k with euler_phi(k) <= degree (the only possible Phi_k divisors)."""
    if degree < 1:
        return []
    bound = min(cap, max(30, 2 * degree * degree + 4))
    return [k for k in range(1, bound + 1) if euler_phi(k) <= degree]


@dataclass(frozen=True)
class PolySplit:
    """poly = z^z_power * (prod Phi_k^mult) * rest, rest(0) != 0 and unity-root free
    up to the scanned index bound."""

    z_power: int
    cyclo: tuple[tuple[int, int], ...]  # (index, multiplicity), ascending
    rest: Poly
    index_bound: int


def split_unity_roots(poly: Poly) -> PolySplit:
    """Factor out the power of z and all cyclotomic divisors of a polynomial."""
    if poly.is_zero:
        raise ValueError("zero polynomial")
    zp = poly.z_power()
    rest = Poly(poly.coeffs[zp:]) if zp else poly
    found: list[tuple[int, int]] = []
    bound = 0
    for k in cyclo_index_candidates(rest.degree):
        bound = max(bound, k)
        if rest.degree == 0:
            continue
        mult = 0
        phi = cyclotomic_poly(k)
        while rest.degree >= phi.degree:
            q, r = divmod(rest, phi)
            if not r.is_zero:
                break
            rest = q
            mult += 1
        if mult:
            found.append((k, mult))
    return PolySplit(z_power=zp, cyclo=tuple(found), rest=rest, index_bound=bound)


def cyclo_indices_can_reach(sources: set[int], d: int, targets: set[int]) -> bool:
    """Can some Phi_t (t in targets) divide Phi_s(z^{d^m}) for s in sources, m >= 1?

    Iterates the index decomposition level by level.  Indices above
    max(targets) only ever produce larger ones, so the dynamics restricted to
    small indices is a map on a finite set; a repeated small-frontier state
    means no new small index will ever appear and the answer is no.
    """
    if not sources or not targets:
        return False
    tmax = max(targets)
    frontier = set(sources)
    seen: set[frozenset[int]] = set()
    while True:
        frontier = {k for f in frontier for k in decompose_cyclo_power(f, d)}
        if frontier & targets:
            return True
        frontier = {k for k in frontier if k <= tmax}
        if not frontier:
            return False
        state = frozenset(frontier)
        if state in seen:
            return False
        seen.add(state)
