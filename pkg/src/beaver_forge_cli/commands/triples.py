"""``beaver-forge triples``: batch triple generation, optional verify and dispense."""

from __future__ import annotations

import argparse
import logging
import time

from beaver_forge.dispense import is_valid_triple, make_servers, reconstruct
from beaver_forge.errors import ProtocolAbortError
from beaver_forge.noise import require_inner_product_length
from beaver_forge.transport import MessageBus
from beaver_forge.triplegen import ProtocolTripleGenerator, triple_stream_digest
from beaver_forge_cli.commands._common import dispense_pairs, session_keys
from beaver_forge_cli.config import Config, write_resolved
from beaver_forge_store import TripleRepository, VaultRepository

logger = logging.getLogger(__name__)


def run(config: Config, args: argparse.Namespace) -> dict:
    params = config.params
    # Abort before any work if a single product already breaks decryption.
    require_inner_product_length(params, 1)
    pk, sk = session_keys(config)

    generator = ProtocolTripleGenerator(
        pk, sk, config.master_seed, workers=config.workers, masking=config.masking,
    )
    started = time.perf_counter()
    pairs = list(generator.generate(args.count))
    seconds = time.perf_counter() - started
    rate = args.count / seconds if seconds > 0 else 0.0
    logger.info("generated %d triples in %.3f s (%.1f/s)", args.count, seconds, rate)

    repo = TripleRepository(config.out_path)
    repo.write(pairs, binary=args.binary)
    files = [str(p) for p in repo.files(binary=args.binary)]

    verified = None
    if args.verify:
        bad = [a.triple_id for a, b in pairs if not is_valid_triple(*reconstruct([a, b]), params.t)]
        if bad:
            raise ProtocolAbortError(f"{len(bad)} of {len(pairs)} triples failed verification, first {bad[0]!r}")
        verified = len(pairs)

    dispensed = None
    if args.dispense:
        vaults = VaultRepository(config.out_path)
        vaults.reset(config.servers)
        servers = make_servers(params, config.servers, config.master_seed, journals=vaults.journals(config.servers))
        dispensed = dispense_pairs(config, pairs, servers, MessageBus(config.master_seed))

    write_resolved(config)
    return {
        "command": "triples",
        "count": len(pairs),
        "seconds": seconds,
        "triples_per_sec": rate,
        "workers": config.workers,
        "masking": config.masking.value,
        "files": files,
        "verified": verified,
        "servers": config.servers,
        "dispensed": dispensed,
        "seed": config.seed,
        "digest": triple_stream_digest(pairs),
    }
