"""sa-lab command-line entry point."""

import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

from src.cli.commands import (
    EXIT_CONFIG,
    cmd_certify,
    cmd_oracle,
    cmd_phase_scan,
    cmd_run,
    parse_xi_list,
)
from src.config.scenario import ConfigError
from src.lyapunov.oracles import OracleKind
from src.utils.logging_config import setup_logger

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 100_000


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Parser with the run, phase-scan, certify and oracle subcommands."""
    parser = argparse.ArgumentParser(
        prog="sa-lab",
        description="Simulate and verify stochastic approximation under heavy-tailed noise",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_scenario_args(sub: argparse.ArgumentParser, threads: bool = True) -> None:
        sub.add_argument("--config", required=True, help="Scenario JSON file")
        sub.add_argument("--out", default="output", help="Output directory (default: output)")
        sub.add_argument("--seed", type=_seed, default=None, help="Overrides the scenario seed")
        if threads:
            sub.add_argument(
                "--threads",
                type=int,
                default=None,
                help="Worker processes, 0 = one per CPU (default: $SA_LAB_THREADS or 1)",
            )

    add_scenario_args(subparsers.add_parser("run", help="Run a scenario ensemble"))

    phase = subparsers.add_parser("phase-scan", help="Run a scenario across decay exponents")
    add_scenario_args(phase)
    phase.add_argument(
        "--xi",
        type=str,
        default=None,
        help="Comma-separated exponents (default: the scenario's xi_list)",
    )

    add_scenario_args(
        subparsers.add_parser("certify", help="Certify a Lyapunov candidate"), threads=False
    )

    oracle = subparsers.add_parser("oracle", help="Random search against a drift inequality")
    oracle.add_argument(
        "--which", required=True, choices=[kind.value for kind in OracleKind], help="Oracle"
    )
    oracle.add_argument(
        "--trials",
        type=int,
        default=DEFAULT_TRIALS,
        help=f"Random inputs (default: {DEFAULT_TRIALS})",
    )
    oracle.add_argument("--seed", type=_seed, default=0, help="Seed (default: 0)")
    oracle.add_argument("--out", default=None, help="Optional directory for the JSON result")
    return parser


def resolve_threads(flag: Optional[int]) -> int:
    """--threads, else $SA_LAB_THREADS, else 1.

    Raises:
        ConfigError: If the value is not a non-negative integer
    """
    if flag is not None:
        value = flag
    else:
        raw = os.getenv("SA_LAB_THREADS", "1")
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"SA_LAB_THREADS: expected an integer, got {raw!r}")
    if value < 0:
        raise ConfigError(f"--threads: must be >= 0, got {value}")
    return value


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, configure logging and dispatch the subcommand."""
    load_dotenv()
    setup_logger("src", os.getenv("SA_LAB_LOG_LEVEL", "INFO"))
    args = build_parser().parse_args(argv)

    if args.command == "oracle":
        return cmd_oracle(args.which, args.trials, seed=args.seed, out_dir=args.out)
    if args.command == "certify":
        return cmd_certify(args.config, args.out, seed=args.seed)

    try:
        threads = resolve_threads(args.threads)
        xi_list = parse_xi_list(args.xi) if getattr(args, "xi", None) is not None else None
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    if args.command == "run":
        return cmd_run(args.config, args.out, seed=args.seed, threads=threads)
    return cmd_phase_scan(args.config, args.out, xi_list=xi_list, seed=args.seed, threads=threads)


if __name__ == "__main__":
    sys.exit(main())
