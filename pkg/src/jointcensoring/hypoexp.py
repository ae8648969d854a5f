"""Density and survival function of sums of independent exponentials.

The closed form for distinct rates (partial fractions over the rate
differences) is exact but cancels catastrophically when rates cluster, which
is the normal situation here: consecutive stages of a censored experiment
have nearly equal at-risk counts, so the component rates differ by fractions
of a percent and the alternating partial-fraction terms can exceed the result
by 15+ orders of magnitude.

Strategy: evaluate the partial-fraction form together with a running bound on
its cancellation error and accept it only when that bound is far below the
result.  Everything else goes through uniformization of the associated
pure-birth Markov chain, whose series has non-negative terms only and is
therefore forward stable at any rate spacing, including ties.  Exactly equal
scales short-circuit to the Erlang closed form.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaincc

from .errors import InvalidScale

__all__ = [
    "pdf",
    "survival",
    "pdf_partial_fraction",
    "survival_partial_fraction",
]

# Accept the partial-fraction value only if its cancellation-error bound is
# below this fraction of the result.
_PF_RTOL = 1e-11
# Largest uniformization argument (max rate * t) handled by the plain series;
# beyond it the Poisson weights are anchored at the mode, and far beyond that
# the transient matrix exponential is squared up from a small time step.
_X_PLAIN = 600.0
_X_WINDOWED = 2e4


def _as_rates(scales) -> np.ndarray:
    scales = np.asarray(scales, dtype=float)
    if scales.ndim != 1 or scales.size == 0:
        raise InvalidScale("scales must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(scales)) or np.any(scales <= 0):
        raise InvalidScale(f"scales must be positive and finite, got {scales!r}")
    return 1.0 / scales


def pdf(scales, t):
    """Density at ``t`` of the sum of independent Exp(mean=scale) variables.

    Zero for t <= 0.  Accepts scalar or array ``t``.
    """
    return _evaluate(scales, t, want_pdf=True)


def survival(scales, t):
    """P(sum > t); equals 1 for t <= 0.  Accepts scalar or array ``t``."""
    return _evaluate(scales, t, want_pdf=False)


def _evaluate(scales, t, want_pdf: bool):
    rates = _as_rates(scales)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t_arr.shape) if want_pdf else np.ones(t_arr.shape)
    pos = t_arr > 0
    if np.any(pos):
        tp = t_arr[pos]
        if np.all(rates == rates[0]):
            vals = _erlang(rates[0], len(rates), tp, want_pdf)
        else:
            vals = _pf_then_uniformized(rates, tp, want_pdf)
        out[pos] = vals
    return float(out[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else out


# -- Erlang (all rates equal) -------------------------------------------------


def _erlang(rate: float, k: int, t: np.ndarray, want_pdf: bool) -> np.ndarray:
    x = rate * t
    if not want_pdf:
        return gammaincc(k, x)
    # log-space keeps large k / large x from overflowing
    return np.exp((k - 1) * np.log(x) - x - math.lgamma(k)) * rate


# -- partial fractions with cancellation guard --------------------------------


def _pf_coefficients(rates: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of exp(-rate_s * t) in the pdf (A) and survival (B).

    A_s = prod(rates) / prod_{j != s}(rate_j - rate_s);  B_s = A_s / rate_s.
    Ties produce inf/nan coefficients, which the acceptance test rejects.
    """
    diffs = rates[None, :] - rates[:, None]
    np.fill_diagonal(diffs, 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        a = rates.prod() / diffs.prod(axis=1)
        b = a / rates
    return a, b


def _pf_then_uniformized(rates: np.ndarray, t: np.ndarray, want_pdf: bool) -> np.ndarray:
    a, b = _pf_coefficients(rates)
    coeff = a if want_pdf else b
    k = len(rates)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = coeff[None, :] * np.exp(-np.outer(t, rates))
        vals = terms.sum(axis=1)
        err_bound = np.abs(terms).max(axis=1) * (k * 4.0 * np.finfo(float).eps)
    hi = np.inf if want_pdf else 1.0 + 1e-9
    ok = np.isfinite(vals) & (vals > 0) & (vals <= hi) & (err_bound <= _PF_RTOL * vals)
    if not ok.all():
        vals = vals.copy()
        vals[~ok] = _uniformized(rates, t[~ok], want_pdf)
    if not want_pdf:
        vals = np.clip(vals, 0.0, 1.0)
    else:
        vals = np.maximum(vals, 0.0)
    return vals


def pdf_partial_fraction(scales, t):
    """The raw distinct-rate closed form; reliable only for well-separated
    rates (kept as an alternate route for cross-checking)."""
    rates = _as_rates(scales)
    a, _ = _pf_coefficients(rates)
    t = np.asarray(t, dtype=float)
    return (a * np.exp(-np.multiply.outer(t, rates))).sum(axis=-1)


def survival_partial_fraction(scales, t):
    """Raw closed-form survival; see :func:`pdf_partial_fraction`."""
    rates = _as_rates(scales)
    _, b = _pf_coefficients(rates)
    t = np.asarray(t, dtype=float)
    return (b * np.exp(-np.multiply.outer(t, rates))).sum(axis=-1)


# -- uniformization ------------------------------------------------------------


def _uniformized(rates: np.ndarray, t: np.ndarray, want_pdf: bool) -> np.ndarray:
    out = np.empty(t.shape)
    if t.size <= 4:
        # root-solving path: plain-float loops beat numpy overhead at small k
        for idx in range(t.size):
            sf, f = _uni_scalar(rates, float(t[idx]))
            out[idx] = f if want_pdf else sf
        return out
    x = rates.max() * t
    small = x <= _X_PLAIN
    if np.any(small):
        sf, f = _uni_batch(rates, t[small])
        out[small] = f if want_pdf else sf
    for idx in np.nonzero(~small)[0]:
        sf, f = _uni_scalar(rates, float(t[idx]))
        out[idx] = f if want_pdf else sf
    return out


def _uni_batch(rates: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Uniformized series for many t at once (requires max(rates)*t <= 600).

    The chain state vector v_j is shared across t values; only the Poisson
    weights depend on t.  All terms are non-negative, so the accumulated
    survival and density keep full relative precision even deep in the tail.
    """
    k = len(rates)
    lam = float(rates.max())
    x = lam * t
    frac = rates / lam
    keep = 1.0 - frac
    v = np.zeros(k)
    v[0] = 1.0
    w = np.exp(-x)
    cumw = w.copy()
    sf_acc = w.copy()  # sum(v_0) = 1
    f_acc = w * v[k - 1]
    x_max = float(x.max(initial=0.0))
    j_cap = int(x_max + 14.0 * math.sqrt(x_max)) + 60
    for j in range(1, j_cap + 1):
        v[1:] = v[1:] * keep[1:] + v[:-1] * frac[:-1]
        v[0] *= keep[0]
        total = v.sum()
        w *= x / j
        cumw += w
        sf_acc += w * total
        f_acc += w * v[k - 1]
        if cumw.min(initial=1.0) >= 1.0 - 1e-15 or total < 1e-320:
            break
    return np.clip(sf_acc, 0.0, 1.0), np.maximum(f_acc * rates[-1], 0.0)


def _uni_scalar(rates: np.ndarray, t: float) -> tuple[float, float]:
    """Single-t uniformization valid for any magnitude of max(rates)*t."""
    # Union bound P(sum > t) <= sum_s P(component_s > t/k): once that
    # underflows, both the survival and the density are far below any
    # tolerance used in this package.
    if np.sum(np.exp(-np.minimum(rates * (t / len(rates)), 800.0))) < 1e-280:
        return 0.0, 0.0
    lam = float(rates.max())
    x = lam * t
    if x > _X_WINDOWED:
        return _uni_squared(rates, t)
    k = len(rates)
    frac = (rates / lam).tolist()
    keep = [1.0 - f for f in frac]
    v = [0.0] * k
    v[0] = 1.0
    if x <= _X_PLAIN:
        j_lo = 0
        w = math.exp(-x)
    else:
        mode = int(x)
        half = int(14.0 * math.sqrt(x)) + 40
        j_lo = max(0, mode - half)
        w = math.exp(-x + j_lo * math.log(x) - math.lgamma(j_lo + 1))
    j_hi = int(x + 14.0 * math.sqrt(x)) + 60
    sf_acc = 0.0
    f_acc = 0.0
    cumw = 0.0
    for j in range(j_hi + 1):
        if j >= j_lo:
            total = sum(v)
            sf_acc += w * total
            f_acc += w * v[k - 1]
            cumw += w
            if cumw >= 1.0 - 1e-15 or total < 1e-320:
                break
            w *= x / (j + 1)
        for s in range(k - 1, 0, -1):
            v[s] = v[s] * keep[s] + v[s - 1] * frac[s - 1]
        v[0] *= keep[0]
    return min(max(sf_acc, 0.0), 1.0), max(f_acc * rates[-1], 0.0)


def _uni_squared(rates: np.ndarray, t: float) -> tuple[float, float]:
    """Transient matrix exponential by uniformization at t / 2^s followed by
    repeated squaring; all matrices are entrywise non-negative."""
    k = len(rates)
    lam = float(rates.max())
    squarings = max(0, math.ceil(math.log2(lam * t / 256.0)))
    step = t / 2.0**squarings
    x = lam * step
    p_sub = np.diag(1.0 - rates / lam)
    idx = np.arange(k - 1)
    p_sub[idx, idx + 1] = rates[:-1] / lam
    term = np.eye(k) * math.exp(-x)
    acc = term.copy()
    j_hi = int(x + 14.0 * math.sqrt(x)) + 60
    for j in range(1, j_hi + 1):
        term = (term @ p_sub) * (x / j)
        acc += term
        if term.max() < 1e-320:
            break
    for _ in range(squarings):
        acc = acc @ acc
    row = acc[0]
    return min(max(float(row.sum()), 0.0), 1.0), max(float(row[-1] * rates[-1]), 0.0)
