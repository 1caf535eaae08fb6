"""Operator CLI: ``beaver-forge``.

Examples::

    # Default parameters, fixed seed, key files under ./out/keys
    beaver-forge keygen --seed c0ffee

    # 10,000 triples on 4 workers, verified, dispensed to 5 server vaults
    beaver-forge triples --seed c0ffee --count 10000 --workers 4 --verify --dispense --servers 5

    # Beaver multiplication across 3 servers, with the cleartext oracle
    beaver-forge demo spdz-mul --x 3 --y 4 --servers 3 --reveal

    # (b, w) . (1, x) using triples from previously written vault journals
    beaver-forge demo dot-product --weights 1,2,3 --bias 4 --inputs 5,6,7 --vaults out/vaults

    # Encryption throughput
    beaver-forge bench-enc --count 1000000

    # Check stored triples / vaults
    beaver-forge verify --triples out
    beaver-forge verify --vaults out/vaults

    # Record one seeded generation + dispense
    beaver-forge export-transcript --seed c0ffee

Reports are JSON on stdout; a short human summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from beaver_forge.models.enums import MaskingMode
from beaver_forge_cli.commands import COMMANDS
from beaver_forge_cli.commands.demo import DEMOS
from beaver_forge_cli.config import load_config
from beaver_forge_cli.errors import EXIT_OK, error_report
from beaver_forge_cli.summary import SummaryRenderer

logger = logging.getLogger(__name__)

_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

# Flags that override Config fields; argparse dest -> Config field.
_CONFIG_FLAGS = {
    "seed": "seed",
    "parties": "parties",
    "servers": "servers",
    "out": "out_dir",
    "workers": "workers",
    "masking": "masking",
    "log_level": "log_level",
}


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="YAML config file (default: $BEAVER_FORGE_CONFIG)")
    common.add_argument("--seed", default=None, help="Hex master seed; omitted -> fresh seed, recorded in the report")
    common.add_argument("--parties", type=int, default=None, help="Online parties m (default: one per server)")
    common.add_argument("--servers", type=int, default=None, help="MPC servers l (default: 3)")
    common.add_argument("--out", default=None, help="Output directory (default: out)")
    common.add_argument("--workers", type=int, default=None, help="Process-pool size for triple generation")
    common.add_argument(
        "--masking", default=None, choices=[m.value for m in MaskingMode],
        help="Bob's masking mode for vector runs (default: aggregate)",
    )
    common.add_argument("--log-level", default=None, choices=_LOG_LEVELS, help="Log level (default: INFO)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="beaver-forge",
        description="Beaver triples from additive HE, dispensed to SPDZ servers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", parents=[common], help="Write Alice's key pair")
    p.add_argument("--force", action="store_true", default=False, help="Overwrite existing key files")

    p = sub.add_parser("triples", parents=[common], help="Generate Beaver triples")
    p.add_argument("--count", type=int, default=1000, help="Number of triples (default: 1000)")
    p.add_argument("--verify", action="store_true", default=False, help="Reconstruct and check every triple")
    p.add_argument("--dispense", action="store_true", default=False, help="Dispense to --servers vault journals")
    p.add_argument("--binary", action="store_true", default=False, help="Also write the BTR1 bulk file")

    p = sub.add_parser("bench-enc", parents=[common], help="Encryption throughput")
    p.add_argument("--count", type=int, default=10_000, help="Number of encryptions (default: 10000)")

    p = sub.add_parser("demo", parents=[common], help="Run an online-phase demo end to end")
    p.add_argument("demo", choices=DEMOS)
    p.add_argument("--x", type=int, default=None, help="spdz-mul: party 1 input (default: 3)")
    p.add_argument("--y", type=int, default=None, help="spdz-mul: party 2 input (default: 4)")
    p.add_argument("--weights", default=None, help="dot-product: comma-separated w (default: 1,2,3)")
    p.add_argument("--bias", type=int, default=None, help="dot-product: b (default: 4)")
    p.add_argument("--inputs", default=None, help="dot-product: comma-separated x (default: 5,6,7)")
    p.add_argument("--trials", type=int, default=1, help="Random instances checked against the oracle")
    p.add_argument("--vaults", default=None, help="Consume triples from vault journals in DIR")
    p.add_argument("--reveal", action="store_true", default=False, help="Include inputs and oracle in the report")

    p = sub.add_parser("verify", parents=[common], help="Check stored triples or vaults")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--triples", default=None, help="Directory with triples/*.jsonl (default: --out)")
    group.add_argument("--vaults", default=None, help="Directory with vault journals")

    p = sub.add_parser("export-transcript", parents=[common], help="Record one seeded run's transcript")
    p.add_argument("--count", type=int, default=1, help="Triples to generate and dispense (default: 1)")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand, print reports; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level or os.getenv("BEAVER_FORGE_LOG_LEVEL", "INFO").upper(), logging.INFO),
        format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
        stream=sys.stderr,
    )
    renderer = SummaryRenderer()

    try:
        overrides = {field: getattr(args, dest) for dest, field in _CONFIG_FLAGS.items()}
        config = load_config(args.config, overrides)
        logging.getLogger().setLevel(config.log_level.upper())
        report = COMMANDS[args.command](config, args)
    except Exception as exc:
        report = error_report(exc)
        print(json.dumps(report, indent=2))
        sys.stderr.write(renderer.render_error(args.command, report))
        return report["exit_code"]

    print(json.dumps(report, indent=2))
    sys.stderr.write(renderer.render(args.command, report))
    return EXIT_OK


def cli() -> None:
    """Console-script entry point: ``beaver-forge``."""
    sys.exit(main())
