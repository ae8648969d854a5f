"""Domain types for the balanced two-sample progressive type-II life test.

Two samples (sizes ``m`` and ``n``) are placed on test simultaneously and the
experiment stops at the ``k``-th failure.  When the i-th failure occurs
(i < k), ``R_i`` surviving units are withdrawn at random from the failing
unit's own population and ``R_i + 1`` from the other one, so both populations
lose exactly ``R_i + 1`` units per stage.  At the k-th failure everything
still on test is withdrawn.  The observed data are the ordered failure times
``w`` together with indicators ``z`` (1 if the failure came from
population 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    DimensionMismatch,
    InfeasibleScheme,
    NonPositiveParams,
)

__all__ = [
    "CensoringScheme",
    "ExpParams",
    "JointSample",
    "SufficientStats",
    "validate_scheme",
    "sufficient_stats",
    "log_likelihood",
]


@dataclass(frozen=True)
class CensoringScheme:
    """Design of the experiment: sample sizes, failure budget, withdrawals.

    Parameters
    ----------
    m, n : int
        Number of units placed on test from population 1 and 2.
    k : int
        Number of failures to observe; must satisfy ``k < min(m, n)``.
    R : tuple of int
        Withdrawal counts ``R_1 .. R_{k-1}`` (the k-th stage removes every
        survivor).  Feasibility requires ``sum(R_i + 1) < min(m, n)``.
    """

    m: int
    n: int
    k: int
    R: tuple[int, ...]
    # Units removed from each population before stage i (S_0 .. S_{k-1}).
    removed_before: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "R", tuple(int(r) for r in self.R))
        validate_scheme(self)
        cum = [0]
        for r in self.R:
            cum.append(cum[-1] + r + 1)
        object.__setattr__(self, "removed_before", tuple(cum))

    def at_risk(self, i: int) -> tuple[int, int]:
        """Units of (pop-1, pop-2) still on test just before the i-th failure
        (1-based)."""
        s = self.removed_before[i - 1]
        return self.m - s, self.n - s


def validate_scheme(scheme: CensoringScheme) -> None:
    """Raise :class:`InfeasibleScheme` unless the design is feasible."""
    m, n, k, R = scheme.m, scheme.n, scheme.k, scheme.R
    if m < 1 or n < 1 or k < 1:
        raise InfeasibleScheme(f"m, n, k must be positive (got m={m}, n={n}, k={k})")
    if k >= min(m, n):
        raise InfeasibleScheme(f"k must satisfy k < min(m, n): k={k}, min(m, n)={min(m, n)}")
    if len(R) != k - 1:
        raise InfeasibleScheme(f"R must have k-1 = {k - 1} entries, got {len(R)}")
    if any(r < 0 for r in R):
        raise InfeasibleScheme(f"withdrawal counts must be non-negative, got R={R}")
    total = sum(r + 1 for r in R)
    if total >= min(m, n):
        raise InfeasibleScheme(
            f"sum(R_i + 1) = {total} must be < min(m, n) = {min(m, n)}"
        )


@dataclass(frozen=True)
class ExpParams:
    """Mean lifetimes of the two exponential populations."""

    theta1: float
    theta2: float

    def __post_init__(self):
        if not (self.theta1 > 0 and self.theta2 > 0):
            raise NonPositiveParams(
                f"means must be > 0, got theta1={self.theta1}, theta2={self.theta2}"
            )


@dataclass(frozen=True)
class JointSample:
    """Observed data: ordered failure times and population indicators.

    ``w`` must be non-decreasing (ties are allowed: recorded data are
    rounded) and ``z[j]`` is 1 iff the j-th failure came from population 1.
    """

    w: tuple[float, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.w)
        z = tuple(int(x) for x in self.z)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "z", z)
        if len(w) != len(z):
            raise DimensionMismatch(f"len(w)={len(w)} != len(z)={len(z)}")
        if any(x < 0 for x in w):
            raise ValueError("failure times must be non-negative")
        if any(b < a for a, b in zip(w, w[1:])):
            raise ValueError("failure times must be non-decreasing")
        if any(v not in (0, 1) for v in z):
            raise ValueError("indicators must be 0 or 1")

    @property
    def m_k(self) -> int:
        return sum(self.z)


@dataclass(frozen=True)
class SufficientStats:
    """Joint complete sufficient statistic (m_k, n_k, A1, A2).

    ``A1``/``A2`` are the total times on test accumulated against each
    population: every failure time w_i (i < k) is charged with weight
    ``R_i + 1`` to both populations, and w_k picks up the remaining unit
    counts ``m - sum(R_i + 1)`` and ``n - sum(R_i + 1)``.
    """

    m_k: int
    n_k: int
    a1: float
    a2: float


def _check_sample(scheme: CensoringScheme, sample: JointSample) -> None:
    if len(sample.w) != scheme.k:
        raise DimensionMismatch(
            f"sample has {len(sample.w)} failures, scheme expects k={scheme.k}"
        )


def sufficient_stats(scheme: CensoringScheme, sample: JointSample) -> SufficientStats:
    """Compute (m_k, n_k, A1, A2) for a sample under the given design."""
    _check_sample(scheme, sample)
    k = scheme.k
    m_k = sample.m_k
    shared = sum((r + 1) * wi for r, wi in zip(scheme.R, sample.w))
    removed = scheme.removed_before[k - 1]
    a1 = shared + (scheme.m - removed) * sample.w[k - 1]
    a2 = shared + (scheme.n - removed) * sample.w[k - 1]
    return SufficientStats(m_k=m_k, n_k=k - m_k, a1=a1, a2=a2)


def log_likelihood(
    scheme: CensoringScheme, sample: JointSample, params: ExpParams
) -> float:
    """Log-likelihood of (theta1, theta2) given the observed (w, z).

    The normalizing constant is the product over failures of the at-risk
    count of the failing population; it is accumulated in log space so large
    designs cannot overflow.
    """
    _check_sample(scheme, sample)
    stats = sufficient_stats(scheme, sample)
    log_c = 0.0
    for i, zi in enumerate(sample.z, start=1):
        m_at, n_at = scheme.at_risk(i)
        log_c += math.log(m_at if zi else n_at)
    return (
        log_c
        - stats.m_k * math.log(params.theta1)
        - stats.n_k * math.log(params.theta2)
        - stats.a1 / params.theta1
        - stats.a2 / params.theta2
    )
