"""Sample generation under the joint censoring scheme.

The ordered failure times have independent exponential spacings: the s-th
spacing has rate ``E_s = (m - S_{s-1})/theta1 + (n - S_{s-1})/theta2`` (total
hazard of everything still on test), and the population indicators are
independent Bernoulli draws.  That makes direct simulation O(k) per sample
and gives the expected test duration in closed form as ``sum(1 / E_s)``.

``apply_scheme`` instead runs the observational process on fixed complete
lifetimes (real data), withdrawing survivors at random at each failure.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from .errors import InfeasibleScheme, InsufficientSurvivors
from .model import CensoringScheme, ExpParams, JointSample
from .counts import pop1_failure_probs

__all__ = [
    "stream_rng",
    "as_generator",
    "stage_rates",
    "expected_duration",
    "generate",
    "generate_batch",
    "apply_scheme",
    "load_plane_7914",
    "load_plane_7913",
]


def stream_rng(master_seed: int, *stream: int) -> np.random.Generator:
    """Deterministic, independent stream: same (seed, stream) -> same draws.

    Streams are derived with ``SeedSequence(entropy, spawn_key)``, so results
    never depend on thread scheduling or on how many workers ran.
    """
    ss = np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=tuple(int(s) for s in stream)
    )
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(seed) -> np.random.Generator:
    """Accept either an integer master seed or a ready Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return stream_rng(int(seed))


def stage_rates(scheme: CensoringScheme, params: ExpParams) -> np.ndarray:
    """Total hazard E_s of the units on test during each of the k stages."""
    s = np.asarray(scheme.removed_before, dtype=float)
    return (scheme.m - s) / params.theta1 + (scheme.n - s) / params.theta2


def expected_duration(scheme: CensoringScheme, params: ExpParams) -> float:
    """Expected time of the k-th (final) failure: sum of mean spacings."""
    return float(np.sum(1.0 / stage_rates(scheme, params)))


def generate(scheme: CensoringScheme, params: ExpParams, seed) -> JointSample:
    """Draw one censored sample.

    Draw order is fixed (k uniforms for the spacings, then k for the
    indicators), so a given (seed, stream) always yields the same sample.
    Spacings use the inverse transform -log(1 - U) / E_s.
    """
    rng = as_generator(seed)
    rates = stage_rates(scheme, params)
    spacings = -np.log1p(-rng.random(scheme.k)) / rates
    w = np.cumsum(spacings)
    z = rng.random(scheme.k) < pop1_failure_probs(scheme, params)
    return JointSample(w=tuple(w), z=tuple(int(b) for b in z))


def generate_batch(
    scheme: CensoringScheme, params: ExpParams, seed, size: int
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized form of :func:`generate`: returns (W, Z) of shape (size, k).

    Used by the bootstrap and the study harness; the draw layout differs from
    repeated scalar calls but is equally deterministic for a given stream.
    """
    rng = as_generator(seed)
    rates = stage_rates(scheme, params)
    w = np.cumsum(-np.log1p(-rng.random((size, scheme.k))) / rates, axis=1)
    z = rng.random((size, scheme.k)) < pop1_failure_probs(scheme, params)
    return w, z.astype(np.int8)


def _draw_without_replacement(rng: np.random.Generator, pool: list, count: int) -> None:
    """Remove ``count`` uniformly chosen items from ``pool`` in place
    (partial Fisher-Yates: swap a random item to the end, pop it)."""
    if count > len(pool):
        raise InsufficientSurvivors(
            f"cannot withdraw {count} units from {len(pool)} survivors"
        )
    for _ in range(count):
        j = int(rng.integers(len(pool)))
        pool[j], pool[-1] = pool[-1], pool[j]
        pool.pop()


def apply_scheme(x_full, y_full, scheme: CensoringScheme, seed) -> JointSample:
    """Run the censoring process on fixed complete lifetimes.

    At each failure (the smallest lifetime among survivors; ties go to
    population 1 and then to the lower index) the failing unit is removed,
    R_i survivors of its own population and R_i + 1 of the other one are
    withdrawn uniformly at random, and the experiment stops at failure k.
    """
    x_full = [float(v) for v in x_full]
    y_full = [float(v) for v in y_full]
    if len(x_full) != scheme.m or len(y_full) != scheme.n:
        raise InfeasibleScheme(
            f"data sizes ({len(x_full)}, {len(y_full)}) do not match scheme "
            f"(m={scheme.m}, n={scheme.n})"
        )
    rng = as_generator(seed)
    alive_x = list(range(scheme.m))
    alive_y = list(range(scheme.n))
    w: list[float] = []
    z: list[int] = []
    for i in range(1, scheme.k + 1):
        best_x = min(alive_x, key=lambda j: x_full[j])
        best_y = min(alive_y, key=lambda j: y_full[j])
        if x_full[best_x] <= y_full[best_y]:
            w.append(x_full[best_x])
            z.append(1)
            alive_x.remove(best_x)
        else:
            w.append(y_full[best_y])
            z.append(0)
            alive_y.remove(best_y)
        if i < scheme.k:
            r = scheme.R[i - 1]
            if z[-1] == 1:
                _draw_without_replacement(rng, alive_x, r)
                _draw_without_replacement(rng, alive_y, r + 1)
            else:
                _draw_without_replacement(rng, alive_y, r)
                _draw_without_replacement(rng, alive_x, r + 1)
    return JointSample(w=tuple(w), z=tuple(z))


def _load_data(name: str) -> tuple[float, ...]:
    text = resources.files("jointcensoring.data").joinpath(name).read_text()
    return tuple(float(line) for line in text.split() if line.strip())


def load_plane_7914() -> tuple[float, ...]:
    """Air-conditioner failure intervals of Boeing 720 plane 7914 (24 values,
    Proschan 1963); used as the population-1 fixture."""
    return _load_data("plane7914.txt")


def load_plane_7913() -> tuple[float, ...]:
    """Plane 7913 intervals (27 values); the population-2 fixture."""
    return _load_data("plane7913.txt")
