"""Monte Carlo performance studies: average estimates, MSEs, interval
lengths and coverage, reported as CSV.

Every replication derives all of its randomness from
``(master_seed, domain, replication, attempt)`` streams, so a study is
reproducible bit for bit regardless of how many worker processes execute it.
Replications whose sample has m_k in {0, k} (no estimates) are regenerated
from the next attempt stream and counted.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np

from .inference import bootstrap_ci, exact_ci, fit
from .model import CensoringScheme, ExpParams, JointSample
from .sampling import generate, stream_rng

__all__ = [
    "StudyConfig",
    "StudyReport",
    "ConfigError",
    "parse_config",
    "load_config",
    "run_point_study",
    "run_ci_study",
    "run_study",
    "report_csv",
]

_DOMAIN_POINT = 0
_DOMAIN_CI_DATA = 1
_DOMAIN_CI_BOOT = 2

CSV_HEADER = "param,ae,mse,al_exact,cp_exact,al_boot,cp_boot,n_degenerate"


class ConfigError(ValueError):
    """Malformed study configuration; carries the offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class StudyConfig:
    scheme: CensoringScheme
    true_params: ExpParams
    n_reps_point: int = 10_000
    n_reps_ci: int = 1_000
    bootstrap_B: int = 1_000
    level: float = 0.90
    master_seed: int = 0
    ci_methods: tuple[str, ...] = ("exact", "bootstrap")

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ConfigError(f"level must be in (0, 1), got {self.level}")
        if self.n_reps_point < 1 or self.n_reps_ci < 0:
            raise ConfigError("replication counts must be positive")
        bad = set(self.ci_methods) - {"exact", "bootstrap"}
        if bad:
            raise ConfigError(f"unknown ci_methods {sorted(bad)}")


@dataclass
class StudyReport:
    """Per-parameter summaries; entries are (theta1, theta2) pairs."""

    ae: Optional[tuple[float, float]] = None
    mse: Optional[tuple[float, float]] = None
    al: dict = field(default_factory=dict)
    cp: dict = field(default_factory=dict)
    n_degenerate: int = 0
    n_flat_tail: int = 0
    runtime_seconds: float = 0.0


# -- configuration files -------------------------------------------------------

_INT_KEYS = {"m", "n", "k", "n_reps_point", "n_reps_ci", "bootstrap_B", "master_seed"}
_FLOAT_KEYS = {"theta1", "theta2", "level"}
_REQUIRED = {"m", "n", "k", "R", "theta1", "theta2"}


def parse_config(text: str) -> StudyConfig:
    """Parse the flat ``key = value`` format (``#`` starts a comment)."""
    values: dict = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key == "R":
                values[key] = tuple(
                    int(tok) for tok in value.split(",") if tok.strip() != ""
                )
            elif key == "ci_methods":
                values[key] = tuple(
                    tok.strip() for tok in value.split(",") if tok.strip() != ""
                )
            else:
                raise ConfigError(f"unknown key {key!r}", lineno)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"bad value for key {key!r}: {exc}", lineno) from exc
        lines[key] = lineno
    missing = _REQUIRED - values.keys()
    if missing:
        raise ConfigError(f"missing required keys: {sorted(missing)}")
    try:
        scheme = CensoringScheme(
            m=values["m"], n=values["n"], k=values["k"], R=values.get("R", ())
        )
        params = ExpParams(values["theta1"], values["theta2"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    extra = {
        key: values[key]
        for key in (
            "n_reps_point",
            "n_reps_ci",
            "bootstrap_B",
            "level",
            "master_seed",
            "ci_methods",
        )
        if key in values
    }
    return StudyConfig(scheme=scheme, true_params=params, **extra)


def load_config(path) -> StudyConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


# -- replication bodies ----------------------------------------------------------


def _valid_sample(
    config: StudyConfig, domain: int, rep: int
) -> tuple[JointSample, int]:
    """Sample conditioned on 1 <= m_k <= k-1; returns (sample, n_regenerated)."""
    attempt = 0
    while True:
        rng = stream_rng(config.master_seed, domain, rep, attempt)
        sample = generate(config.scheme, config.true_params, rng)
        if 1 <= sample.m_k <= config.scheme.k - 1:
            return sample, attempt
        attempt += 1


def _point_rep(config: StudyConfig, rep: int):
    sample, n_regen = _valid_sample(config, _DOMAIN_POINT, rep)
    estimate = fit(config.scheme, sample)
    return estimate.theta1_hat, estimate.theta2_hat, n_regen


def _ci_rep(config: StudyConfig, rep: int):
    sample, n_regen = _valid_sample(config, _DOMAIN_CI_DATA, rep)
    estimate = fit(config.scheme, sample)
    out = {"n_regen": n_regen, "intervals": {}}
    if "exact" in config.ci_methods:
        out["intervals"]["exact"] = tuple(
            exact_ci(config.scheme, estimate, which, config.level)
            for which in ("theta1", "theta2")
        )
    if "bootstrap" in config.ci_methods:
        out["intervals"]["bootstrap"] = bootstrap_ci(
            config.scheme,
            estimate,
            config.level,
            config.bootstrap_B,
            stream_rng(config.master_seed, _DOMAIN_CI_BOOT, rep),
        )
    return out


def _map_reps(worker, config: StudyConfig, n_reps: int, workers: int) -> list:
    """Run replications 0..n_reps-1, returning results in replication order."""
    fn = partial(worker, config)
    if workers <= 1:
        return [fn(rep) for rep in range(n_reps)]
    chunk = max(1, n_reps // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_reps), chunksize=chunk))


# -- studies ----------------------------------------------------------------------


def run_point_study(config: StudyConfig, workers: int = 1) -> StudyReport:
    """Average estimates and mean squared errors over n_reps_point samples."""
    start = time.perf_counter()
    rows = _map_reps(_point_rep, config, config.n_reps_point, workers)
    est = np.array([(t1, t2) for t1, t2, _ in rows])
    truth = np.array([config.true_params.theta1, config.true_params.theta2])
    ae = est.mean(axis=0)
    mse = ((est - truth) ** 2).mean(axis=0)
    return StudyReport(
        ae=(float(ae[0]), float(ae[1])),
        mse=(float(mse[0]), float(mse[1])),
        n_degenerate=sum(r[2] for r in rows),
        runtime_seconds=time.perf_counter() - start,
    )


def run_ci_study(config: StudyConfig, workers: int = 1) -> StudyReport:
    """Average lengths and coverage of the requested interval methods.

    Intervals with an open upper endpoint are excluded from the average
    length (and counted); they cover the truth iff their finite part does.
    """
    start = time.perf_counter()
    rows = _map_reps(_ci_rep, config, config.n_reps_ci, workers)
    truth = (config.true_params.theta1, config.true_params.theta2)
    report = StudyReport(
        n_degenerate=sum(r["n_regen"] for r in rows),
        runtime_seconds=0.0,
    )
    for method in config.ci_methods:
        al = []
        cp = []
        for p in range(2):
            cis = [r["intervals"][method][p] for r in rows]
            finite = [ci.length for ci in cis if not ci.open_upper]
            report.n_flat_tail += sum(ci.open_upper for ci in cis)
            al.append(float(np.mean(finite)) if finite else float("nan"))
            cp.append(float(np.mean([ci.covers(truth[p]) for ci in cis])))
        report.al[method] = tuple(al)
        report.cp[method] = tuple(cp)
    report.runtime_seconds = time.perf_counter() - start
    return report


def run_study(config: StudyConfig, workers: int = 1) -> StudyReport:
    """Point study plus (when configured) the interval study, merged."""
    start = time.perf_counter()
    report = run_point_study(config, workers=workers)
    if config.n_reps_ci > 0 and config.ci_methods:
        ci_report = run_ci_study(config, workers=workers)
        report.al = ci_report.al
        report.cp = ci_report.cp
        report.n_degenerate += ci_report.n_degenerate
        report.n_flat_tail = ci_report.n_flat_tail
    report.runtime_seconds = time.perf_counter() - start
    return report


def _fmt(value) -> str:
    if value is None:
        return ""
    return format(value, ".10g")


def report_csv(report: StudyReport) -> str:
    """Render the pinned CSV layout (one row per parameter)."""
    lines = [CSV_HEADER]
    for p, name in enumerate(("theta1", "theta2")):
        al_e, cp_e = report.al.get("exact", (None, None)), report.cp.get("exact", (None, None))
        al_b, cp_b = report.al.get("bootstrap", (None, None)), report.cp.get("bootstrap", (None, None))
        fields = [
            name,
            _fmt(report.ae[p] if report.ae else None),
            _fmt(report.mse[p] if report.mse else None),
            _fmt(al_e[p]),
            _fmt(cp_e[p]),
            _fmt(al_b[p]),
            _fmt(cp_b[p]),
            str(report.n_degenerate),
        ]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"
