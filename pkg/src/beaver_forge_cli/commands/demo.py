"""``beaver-forge demo``: offline phase, dispensing and online phase end to end.

Without ``--vaults`` the command generates exactly the triples the demo
needs, dispenses them to l servers, and runs the online phase on those
servers.  With ``--vaults DIR`` it reuses journals written by
``triples --dispense`` and consumes triples from them.
"""

from __future__ import annotations

import argparse
import logging

from beaver_forge.constants import DOMAIN_ONLINE
from beaver_forge.dispense import make_servers
from beaver_forge.errors import ParameterError
from beaver_forge.seeding import derive_rng
from beaver_forge.spdz import OnlineSession, TriplePool, dot_product_demo, spdz_mul_demo
from beaver_forge.transport import MessageBus
from beaver_forge.triplegen import ProtocolTripleGenerator
from beaver_forge_cli.commands._common import dispense_pairs, output_root, session_keys
from beaver_forge_cli.config import Config
from beaver_forge_store import VaultRepository

logger = logging.getLogger(__name__)

SPDZ_MUL = "spdz-mul"
DOT_PRODUCT = "dot-product"
DEMOS = (SPDZ_MUL, DOT_PRODUCT)

# Random dot-product instances use lengths 1..MAX_RANDOM_LENGTH.
MAX_RANDOM_LENGTH = 64


def _parse_vector(text: str | None, name: str) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParameterError(f"--{name} must be comma-separated integers, got {text!r}") from None


def _instances(args: argparse.Namespace, config: Config) -> list[dict]:
    """Demo inputs: the flags for one trial, random values for several."""
    t = config.params.t
    lo, hi = config.params.plaintext_range
    if args.trials < 1:
        raise ParameterError(f"trials must be >= 1, got {args.trials}")
    if args.trials == 1:
        if args.demo == SPDZ_MUL:
            return [{"x": args.x if args.x is not None else 3, "y": args.y if args.y is not None else 4}]
        weights = _parse_vector(args.weights, "weights") or [1, 2, 3]
        inputs = _parse_vector(args.inputs, "inputs") or [5, 6, 7]
        return [{"weights": weights, "bias": args.bias if args.bias is not None else 4, "x": inputs}]

    rng = derive_rng(config.master_seed, DOMAIN_ONLINE, 1)
    out = []
    for _ in range(args.trials):
        if args.demo == SPDZ_MUL:
            x, y = rng.integers(lo, hi, size=2, endpoint=True).tolist()
            out.append({"x": x, "y": y})
        else:
            length = int(rng.integers(1, MAX_RANDOM_LENGTH, endpoint=True))
            vals = rng.integers(lo, hi, size=2 * length + 1, endpoint=True).tolist()
            out.append({"weights": vals[:length], "bias": vals[length], "x": vals[length + 1:]})
    logger.debug("drew %d random %s instances over Z_%d", args.trials, args.demo, t)
    return out


def _triples_needed(demo: str, instances: list[dict]) -> int:
    if demo == SPDZ_MUL:
        return len(instances)
    return sum(len(inst["x"]) + 1 for inst in instances)


def run(config: Config, args: argparse.Namespace) -> dict:
    params = config.params
    instances = _instances(args, config)
    bus = MessageBus(config.master_seed)

    if args.vaults:
        vault_repo = VaultRepository(output_root(args.vaults, "vaults"))
        count = vault_repo.discover()
        if count < 2:
            raise ParameterError(f"found {count} vault journals under {vault_repo.dir}, need at least 2")
        servers = make_servers(params, count, config.master_seed, journals=vault_repo.journals(count))
    else:
        servers = make_servers(params, config.servers, config.master_seed)

    if config.online_parties != len(servers):
        raise ParameterError(
            f"online phase has {config.online_parties} parties but the offline phase "
            f"dispensed to {len(servers)} servers"
        )

    if not args.vaults:
        pk, sk = session_keys(config)
        generator = ProtocolTripleGenerator(
            pk, sk, config.master_seed, workers=config.workers, masking=config.masking,
        )
        pairs = list(generator.generate(_triples_needed(args.demo, instances)))
        dispense_pairs(config, pairs, servers, bus)

    pool = TriplePool(servers)
    party_ids = [s.server_id for s in servers]
    reports = []
    for i, inst in enumerate(instances):
        session = OnlineSession(party_ids, params.t, rng=derive_rng(config.master_seed, DOMAIN_ONLINE, 0, i), bus=bus)
        reveal = args.reveal or len(instances) > 1
        if args.demo == SPDZ_MUL:
            reports.append(spdz_mul_demo(session, pool, inst["x"], inst["y"], reveal=reveal))
        else:
            reports.append(dot_product_demo(session, pool, inst["weights"], inst["bias"], inst["x"], reveal=reveal))

    if len(reports) == 1:
        return {"command": "demo", **reports[0].model_dump()}
    matched = sum(1 for r in reports if r.matches_oracle)
    return {
        "command": "demo",
        "demo": args.demo,
        "trials": len(reports),
        "matched": matched,
        "triples_consumed": sum(r.triples_consumed for r in reports),
        "rounds": sum(r.rounds for r in reports),
        "parties": party_ids,
        "transcript_digest": bus.digest(),
    }
