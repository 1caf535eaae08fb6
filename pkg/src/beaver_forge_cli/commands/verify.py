"""``beaver-forge verify``: check stored triples reconstruct to c = ab."""

from __future__ import annotations

import argparse
from pathlib import Path

from beaver_forge.dispense import is_valid_triple, make_servers, reconstruct
from beaver_forge.errors import ParameterError, ProtocolAbortError
from beaver_forge.models.enums import Party
from beaver_forge_cli.commands._common import output_root
from beaver_forge_cli.config import Config
from beaver_forge_store import TripleRepository, VaultRepository


def _verify_triples(config: Config, root: Path) -> dict:
    pairs = TripleRepository(root).read_pairs()
    seen: set[str] = set()
    invalid = []
    for alice_share, bob_share in pairs:
        tid = alice_share.triple_id
        halves = (alice_share.party, bob_share.party)
        if tid in seen or bob_share.triple_id != tid or halves != (Party.ALICE.value, Party.BOB.value):
            invalid.append(tid)
            continue
        seen.add(tid)
        if not is_valid_triple(*reconstruct([alice_share, bob_share], expected=2), alice_share.t):
            invalid.append(tid)
    return {"source": str(root / "triples"), "checked": len(pairs), "invalid": invalid, "pending": 0}


def _verify_vaults(config: Config, root: Path) -> dict:
    repo = VaultRepository(root)
    count = repo.discover()
    if count < 2:
        raise ParameterError(f"found {count} vault journals under {repo.dir}, need at least 2")
    servers = make_servers(config.params, count, config.master_seed, journals=repo.journals(count))
    ready = [set(s.vault.ready_ids()) for s in servers]
    common = sorted(set.intersection(*ready))
    known = set.union(*ready) | {tid for s in servers for tid in s.vault.pending_ids()}
    invalid = []
    for tid in common:
        a, b, c = reconstruct([s.vault.share(tid) for s in servers], expected=count)
        if not is_valid_triple(a, b, c, config.params.t):
            invalid.append(tid)
    pending = len(known) - len(common)
    return {"source": str(repo.dir), "checked": len(common), "invalid": invalid, "pending": pending}


def run(config: Config, args: argparse.Namespace) -> dict:
    if args.vaults:
        result = _verify_vaults(config, output_root(args.vaults, "vaults"))
    else:
        result = _verify_triples(config, output_root(args.triples or config.out_dir, "triples"))
    result["valid"] = result["checked"] - len(result["invalid"])
    report = {"command": "verify", **result}
    if result["invalid"]:
        raise ProtocolAbortError(
            f"{len(result['invalid'])} of {result['checked']} triples failed verification, "
            f"first {result['invalid'][0]!r}"
        )
    return report
