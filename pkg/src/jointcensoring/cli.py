"""Command-line interface.

Thin adapters over the library: no numerical logic lives here.  Exit codes:
0 success, 2 validation/configuration errors, 3 inference degeneracy (no MLE).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from .errors import (
    DimensionMismatch,
    InfeasibleScheme,
    InvalidScale,
    MleDoesNotExist,
    NonPositiveParams,
)
from .inference import bootstrap_ci, exact_ci, fit, simulate_estimates
from .mixture import mle_mixture, pdf_curve
from .model import CensoringScheme, ExpParams, JointSample
from .sampling import expected_duration, generate, stream_rng
from .study import ConfigError, load_config, report_csv, run_study

_USAGE_ERRORS = (
    InfeasibleScheme,
    NonPositiveParams,
    DimensionMismatch,
    InvalidScale,
    ConfigError,
    ValueError,
)


def _parse_r_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")


def _scheme_from_args(args) -> CensoringScheme:
    return CensoringScheme(m=args.m, n=args.n, k=args.k, R=_parse_r_list(args.R))


def _params_from_args(args) -> ExpParams:
    return ExpParams(theta1=args.theta1, theta2=args.theta2)


def _add_scheme_flags(parser) -> None:
    parser.add_argument("--m", type=int, required=True, help="population-1 sample size")
    parser.add_argument("--n", type=int, required=True, help="population-2 sample size")
    parser.add_argument("--k", type=int, required=True, help="number of observed failures")
    parser.add_argument(
        "--R",
        default="",
        help="comma-separated withdrawal counts R_1..R_{k-1} (empty for k=1)",
    )


def _add_param_flags(parser) -> None:
    parser.add_argument("--theta1", type=float, required=True, help="population-1 mean")
    parser.add_argument("--theta2", type=float, required=True, help="population-2 mean")


def _open_out(path: str):
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="")


def _fmt(value: float, precision: int) -> str:
    if math.isinf(value):
        return "inf"
    return format(value, f".{precision}g")


def _read_sample(path: str) -> JointSample:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"w", "z"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected a CSV header with columns i,w,z")
        rows = [(float(row["w"]), int(row["z"])) for row in reader]
    return JointSample(w=tuple(w for w, _ in rows), z=tuple(z for _, z in rows))


def _write_sample(sample: JointSample, out) -> None:
    out.write("i,w,z\n")
    for i, (w, z) in enumerate(zip(sample.w, sample.z), start=1):
        out.write(f"{i},{w!r},{z}\n")


# -- subcommands -----------------------------------------------------------------


def _cmd_simulate(args) -> int:
    scheme = _scheme_from_args(args)
    sample = generate(scheme, _params_from_args(args), stream_rng(args.seed))
    with _open_out(args.out) as out:
        _write_sample(sample, out)
    return 0


def _cmd_duration(args) -> int:
    value = expected_duration(_scheme_from_args(args), _params_from_args(args))
    print(_fmt(value, args.precision))
    return 0


def _print_interval(name: str, ci, precision: int) -> None:
    upper = "inf" if ci.open_upper else _fmt(ci.upper, precision)
    line = f"{name} {int(ci.level * 100)}% CI [{ci.method}]: ({_fmt(ci.lower, precision)}, {upper})"
    if ci.note:
        line += f"  # {ci.note}"
    print(line)


def _fit_and_report(args, methods: tuple[str, ...]) -> int:
    scheme = _scheme_from_args(args)
    sample = _read_sample(args.data)
    estimate = fit(scheme, sample)
    stats = estimate.stats
    p = args.precision
    print(f"theta1_hat: {_fmt(estimate.theta1_hat, p)}")
    print(f"theta2_hat: {_fmt(estimate.theta2_hat, p)}")
    print(f"m_k: {stats.m_k}  n_k: {stats.n_k}  A1: {_fmt(stats.a1, p)}  A2: {_fmt(stats.a2, p)}")
    if "exact" in methods:
        for which in ("theta1", "theta2"):
            ci = exact_ci(scheme, estimate, which, args.level)
            _print_interval(which, ci, p)
    if "boot" in methods:
        ci1, ci2 = bootstrap_ci(scheme, estimate, args.level, args.boot_B, stream_rng(args.seed))
        _print_interval("theta1", ci1, p)
        _print_interval("theta2", ci2, p)
    return 0


def _methods_from_flag(method: str) -> tuple[str, ...]:
    return ("exact", "boot") if method == "both" else (method,)


def _cmd_fit(args) -> int:
    methods = _methods_from_flag(args.method) if args.method else ()
    return _fit_and_report(args, methods)


def _cmd_ci(args) -> int:
    return _fit_and_report(args, _methods_from_flag(args.method))


def _cmd_pdf(args) -> int:
    scheme = _scheme_from_args(args)
    params = _params_from_args(args)
    mix = mle_mixture(scheme, params, args.which)
    t, f = pdf_curve(mix, points=args.points)
    with _open_out(args.out) as out:
        for ti, fi in zip(t, f):
            out.write(f"{ti!r} {fi!r}\n")
    samples = None
    if args.mle_samples > 0:
        pair = simulate_estimates(scheme, params, args.mle_samples, stream_rng(args.seed))
        samples = pair[0] if args.which == "theta1" else pair[1]
        with _open_out(args.samples_out) as out:
            for v in samples:
                out.write(f"{v!r}\n")
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 4.5))
        if samples is not None:
            ax.hist(samples, bins=60, density=True, color="0.8", label="simulated estimates")
        ax.plot(t, f, lw=1.8, label="exact density")
        ax.set_xlabel(f"{args.which} estimate")
        ax.set_ylabel("density")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        plt.close(fig)
    return 0


def _cmd_study(args) -> int:
    config = load_config(args.config)
    report = run_study(config, workers=args.jobs)
    text = report_csv(report)
    with _open_out(args.out) as out:
        out.write(text)
    print(f"runtime_seconds: {report.runtime_seconds:.3f}")
    print(f"n_degenerate: {report.n_degenerate}  n_flat_tail: {report.n_flat_tail}")
    return 0


# -- parser ------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jointcens",
        description=(
            "Simulation and exact inference for two-sample jointly "
            "progressively type-II censored exponential life tests."
        ),
    )
    parser.add_argument("--precision", type=int, default=6, help="significant digits printed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw one censored sample, write CSV i,w,z")
    _add_scheme_flags(p)
    _add_param_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fit", help="MLEs (and optional CIs) from a sample CSV")
    p.add_argument("data", help="sample file with columns i,w,z")
    _add_scheme_flags(p)
    p.add_argument("--method", choices=["exact", "boot", "both"])
    p.add_argument("--level", type=float, default=0.90)
    p.add_argument("--boot-B", type=int, default=1000, dest="boot_B")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("ci", help="confidence intervals from a sample CSV")
    p.add_argument("data", help="sample file with columns i,w,z")
    _add_scheme_flags(p)
    p.add_argument("--method", choices=["exact", "boot", "both"], default="both")
    p.add_argument("--level", type=float, default=0.90)
    p.add_argument("--boot-B", type=int, default=1000, dest="boot_B")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_ci)

    p = sub.add_parser("pdf", help="exact density curve of an estimator")
    _add_scheme_flags(p)
    _add_param_flags(p)
    p.add_argument("--which", choices=["theta1", "theta2"], required=True)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--out", default="-")
    p.add_argument("--mle-samples", type=int, default=0, dest="mle_samples",
                   help="also simulate this many estimates for a histogram")
    p.add_argument("--samples-out", default="-", dest="samples_out")
    p.add_argument("--plot", help="render curve (and histogram) to this image file")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_pdf)

    p = sub.add_parser("duration", help="expected time of the final failure")
    _add_scheme_flags(p)
    _add_param_flags(p)
    p.set_defaults(func=_cmd_duration)

    p = sub.add_parser("study", help="Monte Carlo study from a config file")
    p.add_argument("config", help="flat key = value configuration file")
    p.add_argument("--out", default="study_report.csv")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_study)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MleDoesNotExist as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
