"""Exact Hankel determinants of series coefficients.

H_n = det(c_{i+j-1}) for i, j in 1..n, where c_i is the coefficient of
z^{-i}.  Nonvanishing of H_n certifies that n occurs among the denominator
degrees of the continued-fraction convergents; the package uses that only as
a cross-check against the certified expansion, never as the primary source.

Determinants are computed by fraction-free Bareiss elimination on an integer
matrix obtained by clearing denominators column by column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientPrecision
from .laurent import LaurentSeries


@dataclass(frozen=True)
class HankelReport:
    n_min: int
    n_max: int
    values: tuple[Fraction, ...]
    nonzero: tuple[bool, ...]

    def value(self, n: int) -> Fraction:
        return self.values[n - self.n_min]

    def nonzero_set(self, limit: int | None = None) -> tuple[int, ...]:
        hi = limit if limit is not None else self.n_max
        return tuple(
            n
            for n in range(self.n_min, hi + 1)
            if self.nonzero[n - self.n_min]
        )


def _bareiss_det(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    m = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def hankel_determinants(series: LaurentSeries, n_max: int) -> HankelReport:
    """Exact H_1..H_n_max; requires 2*n_max - 1 known fractional coefficients."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    need = 2 * n_max - 1
    # c_i = coefficient of z^{-i}; indices above the window are unknown unless
    # the series is exact, indices above the top are zero
    c = [Fraction(0)] * (need + 1)
    for i in range(1, need + 1):
        exp = -i
        idx = series.top - exp
        if idx < 0:
            continue
        if idx >= series.valid:
            if not series.exact:
                raise InsufficientPrecision(
                    f"need coefficient of z^{exp}, window ends earlier"
                )
            continue
        c[i] = series.coeffs[idx]
    values = []
    flags = []
    for n in range(1, n_max + 1):
        mat = [[c[i + j - 1] for j in range(1, n + 1)] for i in range(1, n + 1)]
        clear = Fraction(1)
        int_rows = [[0] * n for _ in range(n)]
        for j in range(n):
            den = 1
            for i in range(n):
                den = den * mat[i][j].denominator // math.gcd(
                    den, mat[i][j].denominator
                )
            clear *= den
            for i in range(n):
                int_rows[i][j] = int(mat[i][j] * den)
        det = Fraction(_bareiss_det(int_rows)) / clear
        values.append(det)
        flags.append(det != 0)
    return HankelReport(
        n_min=1, n_max=n_max, values=tuple(values), nonzero=tuple(flags)
    )
