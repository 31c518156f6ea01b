"""Command-line front end for the experiment runners.

Exit codes: 0 on success, 1 on configuration/usage errors (the message
names the offending key or flag), 2 on runtime errors. Progress goes to
stdout; results go to CSV files only.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict

from .channel import Target, TargetSet
from .constellation import build_constellation
from .experiments import ChirpRunner, ConfigError, derive_seed, load_experiment_config, run_experiment
from .params import DEFAULT_CONFIG, derive_params

_EXPERIMENT_COMMANDS = {
    "ber": "ber",
    "spectrum": "spectrum",
    "dispersion": "dispersion",
    "kl-sweep": "kl_sweep",
    "isnr-surface": "isnr_surface",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fmcwisac",
        description="Chirp-based radar/communications link simulator",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for command in _EXPERIMENT_COMMANDS:
        p = sub.add_parser(command, help=f"run the {command} experiment")
        p.add_argument("--config", help="experiment config file (JSON)")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--out", help="output directory override")
        p.add_argument("--trials", type=int, help="trial count override")
        p.add_argument("--quiet", action="store_true")
    demo = sub.add_parser("chirp-demo", help="run one seeded chirp end to end")
    demo.add_argument("--seed", type=int, default=1)
    demo.add_argument("--snr-db", type=float, default=10.0)
    demo.add_argument("--quiet", action="store_true")
    return parser


def _run_demo(args) -> int:
    params = derive_params(DEFAULT_CONFIG)
    runner = ChirpRunner(params)
    const = build_constellation("qam", 16)
    targets = TargetSet((Target(a=1.0 + 0.0j, d=25),))
    payload_seed = derive_seed(args.seed, "isnr_surface", 0, 0)
    noise_seed = derive_seed(args.seed, "isnr_surface", 0, 1)
    report = runner.run(const, targets, args.snr_db, payload_seed, noise_seed)
    for key, value in asdict(report).items():
        print(f"{key}={value}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on its own for --help (0) and usage errors
        return 0 if exc.code in (0, None) else 1

    if args.subcommand == "chirp-demo":
        return _run_demo(args)

    experiment = _EXPERIMENT_COMMANDS[args.subcommand]
    if args.config is None:
        print("error: missing required flag --config", file=sys.stderr)
        return 1
    try:
        cfg = load_experiment_config(
            path=args.config,
            experiment=experiment,
            seed=args.seed,
            trials=args.trials,
            out_path=args.out,
        )
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not args.quiet:
        print(f"running {experiment} (seed={cfg.seed}, trials={cfg.trials})")
    try:
        paths = run_experiment(cfg)
    except Exception as exc:  # noqa: BLE001 - surfaced as exit code 2
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        for path in paths:
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
