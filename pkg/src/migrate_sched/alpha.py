"""Exact computation of the competitive-ratio constant and its machine load profile.

The migration-optimal scheduler keeps the per-machine load of currently-small
jobs below ``beta(j) * L*``, where the coefficients ``beta(1..m)`` follow a
harmonic ramp up to a flat band.  The normalized total of that ideal profile,
as a function of the target ratio ``alpha``, is

    profile_load(m, alpha) =
        (alpha - 1) * (H_{m-1} - H_{K-1}) + K * alpha / m,
    K  = ceil((1 - 1/alpha) * m),

with ``H_k`` the k-th harmonic number.  The optimal ratio for ``m`` machines is
the unique ``alpha`` with ``profile_load(m, alpha) == 1``; it is rational, and
everything in this module computes it exactly.

``limit_constant`` evaluates the ``m -> infinity`` value of the ratio, i.e.
``1 + 1/x`` for the root ``x > 1`` of ``x*e + e == e**x``, by interval-verified
bisection.  ``cesaro_gap`` supports the harmonic-vs-log error-bound checks used
in the test suite.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction
from functools import cached_property, lru_cache

import mpmath

__all__ = [
    "RatioProfile",
    "cesaro_gap",
    "harmonic",
    "limit_constant",
    "profile_load",
    "removal_cap",
    "solve_alpha",
]

_ZERO = Fraction(0)


class _HarmonicCache:
    """Grow-only cache of exact harmonic numbers H_0, H_1, ..."""

    def __init__(self) -> None:
        self._values = [Fraction(0)]
        self._lock = threading.Lock()

    def get(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError(f"harmonic number undefined for k={k}")
        if k >= len(self._values):
            with self._lock:
                values = self._values
                while len(values) <= k:
                    values.append(values[-1] + Fraction(1, len(values)))
        return self._values[k]


_harmonic = _HarmonicCache()


def harmonic(k: int) -> Fraction:
    """Exact k-th harmonic number; H_0 = 0."""
    return _harmonic.get(k)


def _profile_break(m: int, alpha: Fraction) -> int:
    """K = ceil((1 - 1/alpha) * m), the number of flat-band machines."""
    return math.ceil((alpha - 1) * m / alpha)


def profile_load(m: int, alpha) -> Fraction:
    """Normalized total load of the ideal profile for ratio ``alpha``, exactly.

    Strictly increasing and continuous in ``alpha`` on (1, oo); the optimal
    ratio is its unique root at value 1.
    """
    if m < 2:
        raise ValueError(f"need at least 2 machines, got m={m}")
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise ValueError(f"profile load requires alpha > 1, got {alpha}")
    k = _profile_break(m, alpha)
    return (alpha - 1) * (harmonic(m - 1) - harmonic(k - 1)) + Fraction(k, m) * alpha


def removal_cap(alpha: Fraction) -> int:
    """Per-machine cap on migration-phase removals: ceil((2-a)/(a-1)^2) + 4."""
    return math.ceil((2 - alpha) / (alpha - 1) ** 2) + 4


@dataclass(frozen=True)
class RatioProfile:
    """Exact optimal competitive ratio and load profile for ``m`` machines.

    alpha    -- the competitive ratio (rational; root of profile_load == 1)
    mu       -- per-machine cap on migration-phase removals
    k_break  -- floor(m / alpha): machines 1..k_break carry the harmonic ramp
                beta(j) = (alpha-1) * m / (m-j); the rest sit at beta(j) = alpha
    """

    m: int
    alpha: Fraction
    mu: int
    k_break: int

    @cached_property
    def beta(self) -> tuple[Fraction, ...]:
        a, m = self.alpha, self.m
        return tuple(
            (a - 1) * Fraction(m, m - j) if j <= self.k_break else a
            for j in range(1, m + 1)
        )

    def large_threshold(self, lower_bound: Fraction) -> Fraction:
        """Size above which a job counts as large, given the current bound."""
        return (self.alpha - 1) * lower_bound


def _solve_alpha(m: int, verify_unique: bool = False) -> RatioProfile:
    if m < 2:
        raise ValueError(f"need at least 2 machines, got m={m}")
    h_top = harmonic(m - 1)

    def boundary_ge_one(k: int) -> bool:
        # profile_load at the right endpoint alpha = m/(m-k) of piece k
        # simplifies to (k/(m-k)) * (H_{m-1} - H_{k-1} + 1).
        return k * (h_top - harmonic(k - 1) + 1) >= m - k

    # profile_load is strictly increasing, so the piece boundaries cross 1
    # exactly once; bracket the first k whose boundary value reaches 1.
    lo, hi = 1, m - 1  # profile_load(m, m) >= 1 guarantees hi is feasible
    while lo < hi:
        mid = (lo + hi) // 2
        if boundary_ge_one(mid):
            hi = mid
        else:
            lo = mid + 1
    k = lo

    # Solve the linear piece (alpha-1)*(H_{m-1}-H_{k-1}) + k*alpha/m = 1.
    d = h_top - harmonic(k - 1)
    alpha = Fraction(m) * (1 + d) / (m * d + k)
    if _profile_break(m, alpha) != k or profile_load(m, alpha) != 1:
        raise AssertionError(f"inconsistent piecewise solve for m={m}")
    if verify_unique:
        consistent = [
            kk
            for kk in range(1, m)
            if _piece_root_consistent(m, kk, h_top)
        ]
        if consistent != [k]:
            raise AssertionError(f"expected one consistent piece for m={m}, got {consistent}")
    return RatioProfile(m=m, alpha=alpha, mu=removal_cap(alpha), k_break=m - k)


def _piece_root_consistent(m: int, k: int, h_top: Fraction) -> bool:
    d = h_top - harmonic(k - 1)
    alpha = Fraction(m) * (1 + d) / (m * d + k)
    return alpha > 1 and _profile_break(m, alpha) == k


@lru_cache(maxsize=None)
def solve_alpha(m: int) -> RatioProfile:
    """Exact competitive ratio, removal cap, and profile coefficients for m machines."""
    return _solve_alpha(m)


def _exp_gap_sign(x: Fraction, dps: int) -> int:
    """Certified sign of e**x - e*x - e at rational x; 0 when undetermined."""
    iv = mpmath.iv
    saved = iv.dps
    try:
        iv.dps = dps
        xi = iv.mpf(x.numerator) / iv.mpf(x.denominator)
        g = iv.exp(xi) - iv.e * xi - iv.e
        if g > 0:
            return 1
        if g < 0:
            return -1
        return 0
    finally:
        iv.dps = saved


def limit_constant(precision: int) -> Decimal:
    """Limit of the competitive ratios as m grows, to ``precision`` significant digits.

    Finds the root x of x*e + e == e**x on [2, 3] by bisection with
    interval-arithmetic sign tests (so the bracket is verified, not assumed),
    then returns 1 + 1/x.  The bracket is narrowed below 10**-(precision+2)
    before rounding.
    """
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    dps = precision + 15
    lo, hi = Fraction(2), Fraction(3)
    if not (_exp_gap_sign(lo, dps) < 0 < _exp_gap_sign(hi, dps)):
        raise AssertionError("bisection bracket [2, 3] failed verification")
    tol = Fraction(1, 10 ** (precision + 2))
    while hi - lo >= tol:
        mid = (lo + hi) / 2
        sign = _exp_gap_sign(mid, dps)
        if sign == 0:
            dps += 10  # interval too coarse to separate from the root
            continue
        if sign < 0:
            lo = mid
        else:
            hi = mid
    # x in [lo, hi]  =>  ratio in [1 + 1/hi, 1 + 1/lo], width below tol.
    mid_ratio = 1 + (1 / lo + 1 / hi) / 2
    ctx = Context(prec=precision)
    return ctx.divide(Decimal(mid_ratio.numerator), Decimal(mid_ratio.denominator))


def _mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = x._mpf_
    num = -int(man) if sign else int(man)
    return Fraction(num) * Fraction(2) ** int(exp)


def cesaro_gap(m: int, digits: int = 50) -> Fraction:
    """H_m - ln(m*(m+1))/2 - euler_gamma at ``digits`` working precision.

    The value lies strictly inside (0, 1/(6*m*(m+1))); the test suite asserts
    that enclosure.  Returned as the exact rational value of the computed
    approximation.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    h = harmonic(m)
    with mpmath.workdps(digits + 10):
        hf = mpmath.mpf(h.numerator) / mpmath.mpf(h.denominator)
        gap = hf - mpmath.log(m * (m + 1)) / 2 - mpmath.euler
        return _mpf_to_fraction(+gap)
