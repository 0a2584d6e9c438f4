"""Command-line entry point.

Subcommands map one-to-one onto the sweep pipelines plus a single-value
evaluator:

    gradmet coherence --n 3,5,10 --samples 2000 --theta-max 9.5 --out trace.csv
    gradmet scaling --n-max 100 --out pure.csv
    gradmet noisy --type dephasing --rates 0.05,0.1,0.15 --n 2..30 --out noisy.csv
    gradmet oracle-check --n-max 6 --out report.csv
    gradmet eval --op delta_theta_pure_min --args n=10

Exit codes: 0 success, 2 usage error, 3 numeric/capacity error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import analytic, experiments, model, oracle

USAGE_ERROR = 2
NUMERIC_ERROR = 3


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _parse_float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def _parse_range(text: str) -> list[int]:
    """``2..30`` inclusive range, or a comma-separated list."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return _parse_int_list(text)


def _parse_kv_args(text: Optional[str]) -> dict:
    """``k=v,...`` pairs; ints stay ints, ``a:b:c`` becomes a float list."""
    out: dict = {}
    if not text:
        return out
    for pair in text.split(","):
        if not pair:
            continue
        if "=" not in pair:
            raise argparse.ArgumentTypeError(f"expected key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        key = key.strip()
        value = value.strip()
        if ":" in value:
            out[key] = [float(v) for v in value.split(":")]
        else:
            try:
                out[key] = int(value)
            except ValueError:
                out[key] = float(value)
    return out


def _noise_from_kwargs(kwargs: dict) -> model.NoiseRates:
    return model.NoiseRates(
        gamma_p=float(kwargs.pop("gamma_p", 0.0)),
        gamma_d=float(kwargs.pop("gamma_d", 0.0)),
    )


def _eval_with_noise(func):
    def wrapped(**kwargs):
        noise = _noise_from_kwargs(kwargs)
        return func(noise=noise, **kwargs)

    return wrapped


def _eval_config_op(func):
    def wrapped(config: Optional[str] = None, **kwargs):
        overrides = {k: v for k, v in kwargs.items() if k in model.CONFIG_KEYS}
        extra = {k: v for k, v in kwargs.items() if k not in model.CONFIG_KEYS}
        if config:
            cfg, _ = model.load_config(config, overrides)
        else:
            cfg, _ = model.config_from_mapping(overrides)
        return func(cfg, **extra)

    return wrapped


#: Operations reachable from ``gradmet eval``; each is a kwargs-callable
#: returning one number.
EVAL_OPS = {
    "theta1_from_physical": _eval_config_op(model.theta1_from_physical),
    "omega_profile": _eval_config_op(lambda cfg, j: model.omega_profile(cfg, int(j))),
    "s_ratio": lambda n, theta: analytic.s_ratio(n, theta),
    "mean_c1": lambda n, theta: analytic.mean_c1(n, theta),
    "second_moment_c1": lambda n, theta: analytic.second_moment_c1(n, theta),
    "dmean_c1_dtheta": lambda n, theta: analytic.dmean_c1_dtheta(n, theta),
    "delta_theta_pure": lambda n, theta: analytic.delta_theta_pure(n, theta),
    "delta_theta_pure_min": lambda n: analytic.delta_theta_pure_min(n),
    "mean_c1_noisy": _eval_with_noise(lambda n, tau, noise: analytic.mean_c1_noisy(n, tau, noise)),
    "second_moment_c1_noisy": _eval_with_noise(
        lambda n, tau, noise: analytic.second_moment_c1_noisy(n, tau, noise)
    ),
    "delta_theta_noisy": _eval_with_noise(
        lambda n, tau, noise: analytic.delta_theta_noisy(n, tau, noise)
    ),
    "ramsey_probability": lambda omega_t, gamma_t=0.0: analytic.ramsey_probability(omega_t, gamma_t),
    "ramsey_delta_omega": lambda omega_t, t, gamma_t=0.0: analytic.ramsey_delta_omega(
        omega_t, t, gamma_t
    ),
    "uncorrelated_delta_theta": lambda n, t, omega1_t, omega2_t, gamma_t=0.0: (
        analytic.uncorrelated_delta_theta(n, t, omega1_t, omega2_t, gamma_t)
    ),
    "uncorrelated_envelope": lambda n, t, gamma: analytic.uncorrelated_envelope(n, t, gamma),
    "uncorrelated_min_noisy_paper": lambda n, gamma: analytic.uncorrelated_min_noisy_paper(n, gamma),
    "cosine_double_sum": lambda n, theta: analytic.cosine_double_sum(n, theta),
    "sine_odd_sum": lambda n, theta: analytic.sine_odd_sum(n, theta),
    "energy_variance": lambda freqs: analytic.energy_variance(freqs),
    "time_energy_bound": lambda delta_h: analytic.time_energy_bound(delta_h),
    "powerlaw_bound": lambda n, alpha: analytic.powerlaw_bound(n, float(alpha)),
    "numeric_delta_theta": _eval_with_noise(
        lambda n, tau, noise, h=1e-5: oracle.numeric_delta_theta(n, tau, noise, h=h)
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gradmet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common_out = {"required": True, "help": "output file path"}

    p = sub.add_parser("coherence", help="coherence-factor traces over time")
    p.add_argument("--n", type=_parse_int_list, default=[3, 5, 10], help="chain sizes, comma-separated")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--theta-max", type=float, default=9.5)
    p.add_argument("--out", **common_out)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("scaling", help="noiseless minimum-uncertainty scaling")
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--out", **common_out)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("noisy", help="optimized uncertainties under one noise channel")
    p.add_argument("--type", choices=("dephasing", "dissipation"), required=True)
    p.add_argument("--rates", type=_parse_float_list, default=[0.05, 0.1, 0.15])
    p.add_argument("--n", type=_parse_range, default=list(range(2, 31)), help="sizes, e.g. 2..30")
    p.add_argument("--out", **common_out)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("oracle-check", help="closed forms vs exact simulation")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--out", **common_out)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("eval", help="evaluate one operation and print the value")
    p.add_argument("--op", choices=sorted(EVAL_OPS), required=True)
    p.add_argument("--args", default="", help="k=v pairs, comma-separated; lists as a:b:c")
    p.add_argument("--config", default=None, help="config file for physical-unit operations")

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR

    try:
        if args.command == "coherence":
            table = experiments.coherence_trace(args.n, args.samples, args.theta_max)
            table.write(args.out, args.format)
        elif args.command == "scaling":
            table = experiments.pure_scaling(args.n_max)
            table.write(args.out, args.format)
        elif args.command == "noisy":
            table = experiments.noisy_scaling(args.type, args.rates, args.n)
            table.write(args.out, args.format)
        elif args.command == "oracle-check":
            ns = [n for n in experiments.DEFAULT_ORACLE_NS if n <= args.n_max]
            if not ns:
                raise ValueError(f"--n-max {args.n_max} excludes every grid size")
            table = experiments.oracle_report(ns=ns)
            table.write(args.out, args.format)
        elif args.command == "eval":
            kwargs = _parse_kv_args(args.args)
            if args.config is not None:
                kwargs["config"] = args.config
            value = EVAL_OPS[args.op](**kwargs)
            print(f"{value:.16e}")
    except (ValueError, IndexError, ArithmeticError, TypeError, oracle.CapacityError) as exc:
        print(f"gradmet: error: {exc}", file=sys.stderr)
        return NUMERIC_ERROR
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
