"""Exact irrationality exponents of Mahler numbers.

For a Laurent series f in z^{-1} solving f(z) = A(z)/B(z) * f(z^d) and an
integer b with |b| >= 2 at which the hypotheses hold, the irrationality
exponent of f(b) is an exact rational number computable from finitely many
convergents of f.  This package implements the whole pipeline: exact series
solving, certified continued fractions, gap orbits with periodic
cancellation, Hankel cross-checks, and high-precision numeric corroboration.
"""

from .algebra import Poly, Rat, poly_gcd, rat_from_str, rat_to_str
from .contfrac import (
    CfExpansion,
    Convergent,
    cf_expand,
    euclid_cf,
    phi_prefix,
    remainder_top_degree,
)
from .cyclotomic import (
    CoprimeSplit,
    coprime_split,
    cyclo_multiplicity,
    cyclotomic_poly,
    decompose_cyclo_power,
    euler_phi,
    rad,
    reach_depth,
)
from .errors import (
    DegenerateSystem,
    DegreeCapExceeded,
    HypothesisViolated,
    InsufficientPrecision,
    MahlerError,
    NoLaurentSolution,
    SearchCapExceeded,
)
from .gaps import (
    ExponentConfig,
    ExponentResult,
    Gap,
    GapOrbit,
    OrbitStatus,
    evolve_gap,
    find_big_gaps,
    find_primitive_gaps,
    irrationality_exponent,
    max_degree_ratio,
    primitive_size_bound,
    pruning_lo_limit,
    run_orbit,
)
from .hankel import HankelReport, hankel_determinants
from .laurent import (
    LaurentSeries,
    MahlerSystem,
    eval_with_tail,
    rational_series,
    solve_mahler,
)
from .numeric import (
    ApproxPair,
    ValueEstimate,
    approx_pair,
    empirical_exponent,
    growth_ratio_check,
    mahler_value,
)

__version__ = "0.1.0"
