"""Command line entry point for the experiment harness.

Exit codes: 0 success, 2 config error, 3 optimizer non-convergence on any
trial (results are still written, with a trailing status column).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .config import ConfigError, ExperimentConfig, load_config
from .experiments import (
    run_dof_vs_distance,
    run_dof_vs_ris_position,
    run_modes,
    run_rate_vs_ris_size,
    write_modes_csv,
    write_records_csv,
)

_RUNNERS = {
    "rate-vs-n": run_rate_vs_ris_size,
    "dof-vs-distance": run_dof_vs_distance,
    "dof-vs-ris-position": run_dof_vs_ris_position,
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="experiment config (INI)")
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--seed", type=int, default=None, help="override the master seed")
    sub.add_argument("--trials", type=int, default=None, help="override the trial count")
    sub.add_argument("--threads", type=int, default=1, help="worker threads for sweep points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risholo",
        description="Rate and degrees-of-freedom experiments for RIS-aided holographic MIMO links",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log per-trial progress")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("rate-vs-n", "achievable rate against the number of RIS cells"),
        ("dof-vs-distance", "effective rank against the wall separation"),
        ("dof-vs-ris-position", "effective rank against the RIS position"),
        ("modes", "per-cell fields of the strongest communication modes"),
    ):
        sub = subs.add_parser(name, help=help_text)
        _add_common(sub)
    return parser


def _apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be >= 0")
        config = replace(config, master_seed=args.seed)
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError("--trials must be >= 1")
        config = replace(config, trials=args.trials)
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = _apply_overrides(load_config(args.config), args)
        if args.command == "modes":
            header, rows = run_modes(config)
            write_modes_csv(header, rows, args.out)
            return 0
        records = _RUNNERS[args.command](config, threads=max(1, args.threads))
        all_converged = write_records_csv(records, args.out)
        if not all_converged:
            print(
                "warning: optimizer hit the iteration cap on at least one trial; "
                "see the status column",
                file=sys.stderr,
            )
            return 3
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
