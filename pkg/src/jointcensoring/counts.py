"""Exact distribution of the population-1 failure count m_k.

The indicator Z_i of the i-th failure coming from population 1 is Bernoulli
with success probability

    p_i = (m - S_{i-1}) theta2 / [ (m - S_{i-1}) theta2 + (n - S_{i-1}) theta1 ],

where S_{i-1} counts the units each population has lost before stage i, and
the Z_i are mutually independent.  m_k = sum(Z_i) therefore follows a
Poisson-binomial law, computed here by the standard O(k^2) convolution
recursion.  A brute-force enumeration over all 2^k indicator vectors is kept
as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateConditioning, OracleTooLarge
from .model import CensoringScheme, ExpParams

__all__ = [
    "FailureCountDist",
    "pop1_failure_probs",
    "failure_count_dist",
    "failure_count_dist_enumerated",
    "conditional_weight",
    "conditional_weights",
]

_ENUMERATION_LIMIT = 20
_DEGENERATE_EPS = 1e-300


@dataclass(frozen=True)
class FailureCountDist:
    """P(m_k = r) for r = 0..k, plus the stage success probabilities p_i."""

    probs: np.ndarray
    p_seq: np.ndarray

    @property
    def k(self) -> int:
        return len(self.p_seq)


def pop1_failure_probs(scheme: CensoringScheme, params: ExpParams) -> np.ndarray:
    """Probability that each of the k failures comes from population 1."""
    s = np.asarray(scheme.removed_before, dtype=float)
    m_at = scheme.m - s
    n_at = scheme.n - s
    num = m_at * params.theta2
    return num / (num + n_at * params.theta1)


def failure_count_dist(scheme: CensoringScheme, params: ExpParams) -> FailureCountDist:
    """Poisson-binomial law of m_k via the convolution recursion."""
    p_seq = pop1_failure_probs(scheme, params)
    probs = np.zeros(scheme.k + 1)
    probs[0] = 1.0
    for i, p in enumerate(p_seq):
        probs[1 : i + 2] = probs[1 : i + 2] * (1.0 - p) + probs[: i + 1] * p
        probs[0] *= 1.0 - p
    return FailureCountDist(probs=probs, p_seq=p_seq)


def failure_count_dist_enumerated(
    scheme: CensoringScheme, params: ExpParams
) -> FailureCountDist:
    """Brute-force oracle: the literal sum over all indicator vectors.

    Evaluates, for every z with sum(z) = r, the product of per-stage at-risk
    counts of the failing population over the common denominators, times
    theta1^(k-r) theta2^r.  Exponential in k; refuse k > 20.
    """
    k = scheme.k
    if k > _ENUMERATION_LIMIT:
        raise OracleTooLarge(f"enumeration over 2^{k} terms refused (k > {_ENUMERATION_LIMIT})")
    th1, th2 = params.theta1, params.theta2
    s = np.asarray(scheme.removed_before, dtype=float)
    m_at = scheme.m - s
    n_at = scheme.n - s
    denom = m_at * th2 + n_at * th1
    probs = np.zeros(k + 1)
    for r in range(k + 1):
        total = 0.0
        for ones in combinations(range(k), r):
            mask = np.zeros(k, dtype=bool)
            mask[list(ones)] = True
            term = np.prod(np.where(mask, m_at, n_at) / denom)
            total += term * th1 ** (k - r) * th2**r
        probs[r] = total
    return FailureCountDist(probs=probs, p_seq=pop1_failure_probs(scheme, params))


def _conditioning_prob(dist: FailureCountDist) -> float:
    p_cond = float(np.sum(dist.probs[1:-1]))
    if p_cond < _DEGENERATE_EPS:
        raise DegenerateConditioning(
            f"P(1 <= m_k <= k-1) = {p_cond!r} is numerically zero"
        )
    return p_cond


def conditional_weights(dist: FailureCountDist) -> np.ndarray:
    """P(m_k = r | 1 <= m_k <= k-1) for r = 1..k-1."""
    return dist.probs[1:-1] / _conditioning_prob(dist)


def conditional_weight(dist: FailureCountDist, r: int) -> float:
    """Single conditional weight; r must lie in 1..k-1."""
    if not 1 <= r <= dist.k - 1:
        raise IndexError(f"r={r} outside 1..{dist.k - 1}")
    return float(dist.probs[r] / _conditioning_prob(dist))
