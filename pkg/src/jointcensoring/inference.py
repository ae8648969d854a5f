"""Point estimation and confidence intervals.

Both mean estimators exist on the event 1 <= m_k <= k-1 and are then simply
total time on test over failure count.  Exact intervals invert the
estimator's survival function: the endpoints solve

    P_theta(estimator > observed | 1 <= m_k <= k-1) = alpha/2   (lower)
                                                    = 1-alpha/2 (upper)

with the other mean fixed at its estimate.  The left side is continuous and
strictly increasing in theta, so bracketing bisection is guaranteed to
converge; for extreme designs the upper equation can stay below 1 - alpha/2
for arbitrarily large theta (the survival curve goes flat), in which case the
upper endpoint is reported as open (infinity) with a diagnostic note.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import MleDoesNotExist
from .mixture import mle_mixture
from .model import CensoringScheme, ExpParams, JointSample, SufficientStats, sufficient_stats
from .sampling import as_generator, generate_batch

__all__ = [
    "MleEstimate",
    "ConfidenceInterval",
    "fit",
    "exact_ci",
    "bootstrap_ci",
    "simulate_estimates",
]

_RESIDUAL_TOL = 1e-8
_UPPER_CAP_FACTOR = 1e6
_MAX_BISECTIONS = 200


@dataclass(frozen=True)
class MleEstimate:
    theta1_hat: float
    theta2_hat: float
    stats: SufficientStats

    def value(self, which: str) -> float:
        return self.theta1_hat if which == "theta1" else self.theta2_hat


@dataclass(frozen=True)
class ConfidenceInterval:
    """(lower, upper) at the given level; ``upper`` may be ``inf`` when the
    defining equation has no finite solution (see module docstring)."""

    lower: float
    upper: float
    level: float
    method: str
    note: Optional[str] = None

    @property
    def open_upper(self) -> bool:
        return math.isinf(self.upper)

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def covers(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def fit(scheme: CensoringScheme, sample: JointSample) -> MleEstimate:
    """Maximum likelihood estimates (A1/m_k, A2/n_k).

    Raises :class:`MleDoesNotExist` when every failure came from a single
    population (m_k = 0 or m_k = k).
    """
    stats = sufficient_stats(scheme, sample)
    if not 1 <= stats.m_k <= scheme.k - 1:
        raise MleDoesNotExist(stats.m_k, scheme.k)
    return MleEstimate(
        theta1_hat=stats.a1 / stats.m_k,
        theta2_hat=stats.a2 / stats.n_k,
        stats=stats,
    )


def _survival_at(
    scheme: CensoringScheme, which: str, theta: float, nuisance: float, obs: float
) -> float:
    if which == "theta1":
        params = ExpParams(theta1=theta, theta2=nuisance)
    else:
        params = ExpParams(theta1=nuisance, theta2=theta)
    return mle_mixture(scheme, params, which).survival(obs)


def exact_ci(
    scheme: CensoringScheme,
    estimate: MleEstimate,
    which: str,
    level: float = 0.90,
) -> ConfidenceInterval:
    """Exact interval for one mean with the other fixed at its estimate.

    Each endpoint satisfies its defining equation to an absolute residual
    below 1e-8.
    """
    if not 0.5 < level < 1.0:
        raise ValueError(f"level must be in (0.5, 1), got {level}")
    alpha = 1.0 - level
    obs = estimate.value(which)
    nuisance = estimate.theta2_hat if which == "theta1" else estimate.theta1_hat

    def h(theta: float) -> float:
        return _survival_at(scheme, which, theta, nuisance, obs)

    lower = _solve_lower(h, alpha / 2.0, obs)
    upper, note = _solve_upper(h, 1.0 - alpha / 2.0, obs)
    return ConfidenceInterval(
        lower=lower, upper=upper, level=level, method="exact", note=note
    )


def _solve_lower(h, target: float, start: float) -> float:
    hi = start
    lo = start
    # h is increasing and h(start) is around 1/2 > target, but expand up
    # defensively in case the observed value sits in the lower tail.
    while h(hi) < target:
        hi *= 2.0
        if hi > start * _UPPER_CAP_FACTOR:
            raise ArithmeticError("failed to bracket the lower endpoint from above")
    while h(lo) > target:
        lo *= 0.5
        if lo < start * 1e-12:
            raise ArithmeticError("failed to bracket the lower endpoint from below")
    return _bisect(h, target, lo, hi)


def _solve_upper(h, target: float, start: float) -> tuple[float, Optional[str]]:
    cap = start * _UPPER_CAP_FACTOR
    lo = start
    while h(lo) > target:  # defensive; h(start) ~ 1/2 < target normally
        lo *= 0.5
        if lo < start * 1e-12:
            raise ArithmeticError("failed to bracket the upper endpoint from below")
    hi = lo
    while True:
        hi *= 2.0
        if hi >= cap:
            val = h(cap)
            if val < target:
                return math.inf, (
                    f"flat upper tail: survival reaches only {val:.6f} < "
                    f"{target:.6f} at the search cap {cap:.6g}"
                )
            hi = cap
            break
        if h(hi) >= target:
            break
    return _bisect(h, target, lo, hi), None


def _bisect(h, target: float, lo: float, hi: float) -> float:
    mid = 0.5 * (lo + hi)
    for _ in range(_MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        val = h(mid)
        if abs(val - target) <= 0.1 * _RESIDUAL_TOL:
            return mid
        if val < target:
            lo = mid
        else:
            hi = mid
        if (hi - lo) <= 1e-15 * mid:
            break
    return mid


def simulate_estimates(
    scheme: CensoringScheme, params: ExpParams, size: int, seed
) -> tuple[np.ndarray, np.ndarray, int]:
    """Draw ``size`` estimate pairs conditioned on both existing.

    Samples with m_k in {0, k} are redrawn; returns (theta1_hats,
    theta2_hats, n_regenerated).
    """
    rng = as_generator(seed)
    r_plus_1 = np.asarray(scheme.R, dtype=float) + 1.0
    removed = scheme.removed_before[scheme.k - 1]
    theta1s: list[np.ndarray] = []
    theta2s: list[np.ndarray] = []
    collected = 0
    n_regenerated = 0
    for _ in range(200):
        w, z = generate_batch(scheme, params, rng, size=size - collected)
        m_k = z.sum(axis=1)
        valid = (m_k >= 1) & (m_k <= scheme.k - 1)
        n_regenerated += int((~valid).sum())
        w, m_k = w[valid], m_k[valid]
        shared = w[:, :-1] @ r_plus_1
        theta1s.append((shared + (scheme.m - removed) * w[:, -1]) / m_k)
        theta2s.append((shared + (scheme.n - removed) * w[:, -1]) / (scheme.k - m_k))
        collected += int(valid.sum())
        if collected == size:
            return np.concatenate(theta1s), np.concatenate(theta2s), n_regenerated
    raise RuntimeError("sampling kept producing degenerate samples")


def bootstrap_ci(
    scheme: CensoringScheme,
    estimate: MleEstimate,
    level: float,
    B: int,
    seed,
) -> tuple[ConfidenceInterval, ConfidenceInterval]:
    """Percentile intervals from B parametric resamples at the fitted means.

    Resamples with m_k in {0, k} have no estimates and are redrawn (the count
    is recorded on the intervals); endpoints are the order statistics at the
    floor indices [alpha/2 * B] and [(1 - alpha/2) * B], clamped to 1..B.
    """
    if B < 100:
        raise ValueError(f"B must be >= 100, got {B}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    params = ExpParams(estimate.theta1_hat, estimate.theta2_hat)
    theta1_stars, theta2_stars, n_regenerated = simulate_estimates(scheme, params, B, seed)

    alpha = 1.0 - level
    i_lo = min(max(math.floor(alpha / 2.0 * B), 1), B)
    i_hi = min(max(math.floor((1.0 - alpha / 2.0) * B), 1), B)
    note = f"regenerated {n_regenerated} degenerate resamples" if n_regenerated else None

    def interval(stars: np.ndarray) -> ConfidenceInterval:
        ordered = np.sort(stars)
        return ConfidenceInterval(
            lower=float(ordered[i_lo - 1]),
            upper=float(ordered[i_hi - 1]),
            level=level,
            method="bootstrap",
            note=note,
        )

    return interval(theta1_stars), interval(theta2_stars)
