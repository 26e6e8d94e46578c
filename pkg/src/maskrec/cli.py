"""Command-line harness: simulate, sweep, spectrum, verify.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numeric/model failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    ConfigurationError,
    DegenerateInputError,
    DimensionError,
    ModelError,
    NumericError,
)
from . import harness

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key/value scenario config file")
    parser.add_argument(
        "--scenario-preset",
        choices=sorted(harness.PRESETS),
        help="start from a named scenario preset",
    )
    parser.add_argument("--n", type=int, help="grid size")
    parser.add_argument("--shape", help="mask shape spec, e.g. disc:measure=100")
    parser.add_argument("--model-window", dest="model_window")
    parser.add_argument("--recon-window", dest="recon_window")
    parser.add_argument("--K", dest="count", type=int, help="noise realizations per trial")
    parser.add_argument("--sigma", type=float)
    parser.add_argument("--noise-kind", dest="noise_kind", choices=["complex", "real"])
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--r-list", dest="r_list", help="comma-separated radii")
    parser.add_argument("--out-dir", default="out", help="artifact directory")
    parser.add_argument("--threads", type=int, help="worker threads (or MASKREC_THREADS)")


def _scenario_from_args(args: argparse.Namespace) -> harness.Scenario:
    base = None
    if args.scenario_preset:
        base = harness.PRESETS[args.scenario_preset]
    if args.config:
        base = harness.scenario_from_mapping(harness.load_config(args.config), base)
    overrides: dict[str, str] = {}
    for key, attr in [
        ("n", "n"), ("shape", "shape"), ("model_window", "model_window"),
        ("recon_window", "recon_window"), ("K", "count"), ("sigma", "sigma"),
        ("noise_kind", "noise_kind"), ("trials", "trials"), ("seed", "seed"),
        ("r_list", "r_list"),
    ]:
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = str(value)
    if base is None and not overrides:
        raise ConfigurationError(
            "no scenario given: use --config, --scenario-preset, or flags"
        )
    return harness.scenario_from_mapping(overrides, base)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maskrec",
        description="Recover a binary time-frequency mask from filtered white noise",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run seeded Monte Carlo trials")
    _add_scenario_args(p_sim)

    p_sweep = sub.add_parser("sweep", help="sweep K, sigma, or mask measure")
    _add_scenario_args(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=["K", "sigma", "measure"])
    p_sweep.add_argument(
        "--values", required=True, help="comma-separated ascending axis values"
    )

    p_spec = sub.add_parser("spectrum", help="eigenvalue profile of the operator")
    _add_scenario_args(p_spec)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("--sizes", default="8,16,32", help="comma-separated grid sizes")
    p_verify.add_argument("--seed", type=int, default=20240901)
    return parser


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "verify":
        sizes = tuple(int(s) for s in args.sizes.split(",") if s.strip())
        checks = harness.run_verify(ns=sizes, seed=args.seed)
        failures = [c for c in checks if not c.passed]
        for check in checks:
            print(check.line())
        print(f"{len(checks) - len(failures)}/{len(checks)} checks passed")
        return EXIT_OK if not failures else EXIT_VERIFY_FAILED

    scenario = _scenario_from_args(args)
    if args.command == "simulate":
        results = harness.run_simulate(scenario, args.out_dir, threads=args.threads)
        successes = sum(all(r.success_at_r) for r in results)
        print(
            f"{len(results)} trials -> {args.out_dir}/trials.csv "
            f"({successes} contained at the strictest radius)"
        )
        return EXIT_OK
    if args.command == "sweep":
        values_str = [v for v in args.values.split(",") if v.strip()]
        values = [int(v) if args.axis == "K" else float(v) for v in values_str]
        rows = harness.run_sweep(scenario, args.axis, values, args.out_dir, args.threads)
        print(f"{len(rows)} sweep rows -> {args.out_dir}/summary.csv")
        return EXIT_OK
    if args.command == "spectrum":
        path = harness.run_spectrum(scenario, args.out_dir)
        print(f"spectrum -> {path}")
        return EXIT_OK
    raise ConfigurationError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ConfigurationError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, ModelError, DegenerateInputError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
