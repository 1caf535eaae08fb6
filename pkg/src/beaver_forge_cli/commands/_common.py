"""Helpers shared by several subcommands."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

from beaver_forge.ahe import PublicKey, SecretKey, keygen
from beaver_forge.constants import DOMAIN_DISPENSE, DOMAIN_KEYGEN
from beaver_forge.dispense import Dispenser, MpcServer
from beaver_forge.interfaces import TriplePair
from beaver_forge.models.enums import Party
from beaver_forge.seeding import derive_rng
from beaver_forge.transport import MessageBus
from beaver_forge_cli.config import Config
from beaver_forge_store import KeyRepository

logger = logging.getLogger(__name__)


def derive_keys(config: Config) -> tuple[PublicKey, SecretKey]:
    """Alice's key pair for this seed (identical to what ``keygen`` writes)."""
    return keygen(config.params, derive_rng(config.master_seed, DOMAIN_KEYGEN))


def session_keys(config: Config, key_dir: Path | None = None) -> tuple[PublicKey, SecretKey]:
    """Saved keys when present, else the seed-derived pair."""
    repo = KeyRepository(key_dir if key_dir is not None else config.out_path)
    if repo.exists():
        logger.info("using key files from %s", repo.dir)
        return repo.load(config.params)
    return derive_keys(config)


def dispense_pairs(
    config: Config,
    pairs: Sequence[TriplePair],
    servers: Sequence[MpcServer],
    bus: MessageBus,
) -> dict:
    """Dispense both halves of every pair to every server; retry once."""
    dispensers = {
        party: Dispenser(party, servers, bus, derive_rng(config.master_seed, DOMAIN_DISPENSE, i))
        for i, party in enumerate(Party)
    }
    for alice_share, bob_share in pairs:
        dispensers[Party.ALICE].dispense(alice_share)
        dispensers[Party.BOB].dispense(bob_share)
    for dispenser in dispensers.values():
        dispenser.retry_pending()
    pending = sum(len(d.pending) for d in dispensers.values())
    if pending:
        logger.warning("%d deliveries still pending after retry", pending)
    return {"triples": len(pairs), "pending": pending}


def output_root(path: str | Path, leaf: str) -> Path:
    """Accept either an output directory or its ``triples``/``vaults`` child."""
    p = Path(path)
    return p.parent if p.name == leaf else p
