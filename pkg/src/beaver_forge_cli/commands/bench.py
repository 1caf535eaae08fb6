"""``beaver-forge bench-enc``: encryption throughput."""

from __future__ import annotations

import argparse
import logging
import time

from beaver_forge.ahe import encrypt
from beaver_forge.constants import DOMAIN_BENCH, REFERENCE_ENC_PER_SEC
from beaver_forge.errors import ParameterError
from beaver_forge.seeding import derive_rng
from beaver_forge_cli.commands._common import derive_keys
from beaver_forge_cli.config import Config

logger = logging.getLogger(__name__)


def run(config: Config, args: argparse.Namespace) -> dict:
    if args.count < 0:
        raise ParameterError(f"count must be >= 0, got {args.count}")
    params = config.params
    pk, _ = derive_keys(config)
    rng = derive_rng(config.master_seed, DOMAIN_BENCH)
    lo, hi = params.plaintext_range
    messages = rng.integers(lo, hi, size=args.count, endpoint=True).tolist()

    started = time.perf_counter()
    for m in messages:
        encrypt(pk, m, rng)
    seconds = time.perf_counter() - started

    rate = args.count / seconds if args.count and seconds > 0 else 0.0
    logger.info("encrypted %d plaintexts in %.3f s", args.count, seconds)
    return {
        "command": "bench-enc",
        "count": args.count,
        "seconds": seconds,
        "enc_per_sec": rate,
        "baseline_enc_per_sec": REFERENCE_ENC_PER_SEC,
        "ratio_to_baseline": rate / REFERENCE_ENC_PER_SEC if rate else None,
        "params": {"n": params.ring.n, "q": params.ring.q, "t": params.t},
    }
