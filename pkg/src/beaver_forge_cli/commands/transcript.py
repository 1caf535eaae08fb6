"""``beaver-forge export-transcript``: one seeded generation + dispense, recorded."""

from __future__ import annotations

import argparse

from beaver_forge.dispense import make_servers
from beaver_forge.transport import MessageBus
from beaver_forge.triplegen import ProtocolTripleGenerator
from beaver_forge_cli.commands._common import dispense_pairs, session_keys
from beaver_forge_cli.config import Config, write_resolved
from beaver_forge_store import TranscriptRepository


def run(config: Config, args: argparse.Namespace) -> dict:
    params = config.params
    pk, sk = session_keys(config)
    bus = MessageBus(config.master_seed)
    generator = ProtocolTripleGenerator(pk, sk, config.master_seed, masking=config.masking, bus=bus)
    pairs = list(generator.generate(args.count))
    servers = make_servers(params, config.servers, config.master_seed)
    dispense_pairs(config, pairs, servers, bus)

    repo = TranscriptRepository(config.out_path)
    digest = repo.write(bus.transcript)
    write_resolved(config)
    return {
        "command": "export-transcript",
        "path": str(repo.path),
        "envelopes": len(bus.transcript.envelopes),
        "bytes_sent": dict(bus.bytes_sent),
        "seed": config.seed,
        "digest": digest,
    }
