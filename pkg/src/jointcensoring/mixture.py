"""Exact sampling distributions of the two scale estimators.

Conditionally on the population-1 failure count m_k = r (with 1 <= r <= k-1
so that both estimators exist), each estimator is distributed as a sum of k
independent exponentials whose means depend on the stage at-risk counts, the
true means, and r.  Unconditionally the estimator follows a mixture of those
hypoexponential laws weighted by P(m_k = r | 1 <= m_k <= k-1); when m = n all
k means inside a component coincide and the components reduce to gamma laws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hypoexp
from .counts import conditional_weights, failure_count_dist
from .model import CensoringScheme, ExpParams

__all__ = [
    "MleMixture",
    "component_scales",
    "mle_mixture",
    "mle_moments",
    "pdf_curve",
]

_WHICH = ("theta1", "theta2")


def _check_which(which: str) -> None:
    if which not in _WHICH:
        raise ValueError(f"which must be one of {_WHICH}, got {which!r}")


def component_scales(
    scheme: CensoringScheme, params: ExpParams, r: int, which: str
) -> np.ndarray:
    """Exponential means of the k summands of the component with m_k = r.

    For the population-1 estimator the s-th mean is
    ``(m - S_{s-1}) theta1 theta2 / (r [ (m - S_{s-1}) theta2 + (n - S_{s-1}) theta1 ])``;
    the population-2 version replaces the leading count by ``n - S_{s-1}``
    and divides by ``k - r``.
    """
    _check_which(which)
    if not 1 <= r <= scheme.k - 1:
        raise IndexError(f"r={r} outside 1..{scheme.k - 1}")
    s = np.asarray(scheme.removed_before, dtype=float)
    m_at = scheme.m - s
    n_at = scheme.n - s
    th1, th2 = params.theta1, params.theta2
    denom = m_at * th2 + n_at * th1
    if which == "theta1":
        return m_at * th1 * th2 / (r * denom)
    return n_at * th1 * th2 / ((scheme.k - r) * denom)


@dataclass(frozen=True)
class MleMixture:
    """Mixture representation of an estimator's exact distribution.

    ``weights[r-1]`` is the conditional weight of m_k = r and
    ``scales[r-1]`` holds that component's k exponential means.
    """

    weights: np.ndarray
    scales: np.ndarray
    which: str

    @property
    def k(self) -> int:
        return self.scales.shape[1]

    def pdf(self, t):
        acc = None
        for w, row in zip(self.weights, self.scales):
            term = w * hypoexp.pdf(row, t)
            acc = term if acc is None else acc + term
        return acc

    def survival(self, t):
        acc = None
        for w, row in zip(self.weights, self.scales):
            term = w * hypoexp.survival(row, t)
            acc = term if acc is None else acc + term
        return acc

    def cdf(self, t):
        return 1.0 - self.survival(t)

    def mean(self) -> float:
        return float(self.weights @ self.scales.sum(axis=1))

    def second_moment(self) -> float:
        s1 = self.scales.sum(axis=1)
        s2 = (self.scales**2).sum(axis=1)
        # per component: E(X^2) = 2*sum(a^2) + sum_{i != j} a_i a_j = s1^2 + s2
        return float(self.weights @ (s1**2 + s2))

    def std(self) -> float:
        mean = self.mean()
        return float(np.sqrt(max(self.second_moment() - mean**2, 0.0)))

    def quantile(self, p: float) -> float:
        """Inverse CDF by bisection (the CDF is continuous and increasing)."""
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must be in (0, 1), got {p}")
        target = 1.0 - p
        hi = self.mean() + 10.0 * max(self.std(), self.mean())
        while self.survival(hi) > target:
            hi *= 2.0
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.survival(mid) > target:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-12 * max(hi, 1.0):
                break
        return 0.5 * (lo + hi)


def mle_mixture(scheme: CensoringScheme, params: ExpParams, which: str) -> MleMixture:
    """Assemble weights and component scales for one estimator."""
    _check_which(which)
    weights = conditional_weights(failure_count_dist(scheme, params))
    scales = np.vstack(
        [component_scales(scheme, params, r, which) for r in range(1, scheme.k)]
    )
    return MleMixture(weights=weights, scales=scales, which=which)


def mle_moments(
    scheme: CensoringScheme, params: ExpParams, which: str
) -> tuple[float, float]:
    """Closed-form first two moments of the conditional estimator."""
    mix = mle_mixture(scheme, params, which)
    return mix.mean(), mix.second_moment()


def pdf_curve(mix: MleMixture, points: int = 400) -> tuple[np.ndarray, np.ndarray]:
    """Density curve on a grid from 0 to the 1 - 1e-7 quantile.

    The grid covers essentially all of the mass so that a trapezoid
    integral of the emitted curve reproduces 1 to ~1e-5.
    """
    if points < 2:
        raise ValueError("points must be >= 2")
    hi = mix.quantile(1.0 - 1e-7)
    t = np.linspace(0.0, hi, points)
    return t, mix.pdf(t)
