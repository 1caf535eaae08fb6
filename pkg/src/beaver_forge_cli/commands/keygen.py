"""``beaver-forge keygen``: write Alice's key pair."""

from __future__ import annotations

import argparse
import hashlib

from beaver_forge.codec import encode_public_key, encode_secret_key
from beaver_forge.noise import max_inner_product_length
from beaver_forge_cli.commands._common import derive_keys
from beaver_forge_cli.config import Config, write_resolved
from beaver_forge_store import KeyRepository


def run(config: Config, args: argparse.Namespace) -> dict:
    params = config.params
    pk, sk = derive_keys(config)
    repo = KeyRepository(config.out_path)
    repo.save(pk, sk, force=args.force)
    write_resolved(config)
    digest = hashlib.sha256(encode_public_key(pk) + encode_secret_key(sk)).hexdigest()
    return {
        "command": "keygen",
        "public_key": str(repo.public_path),
        "secret_key": str(repo.secret_path),
        "params": {"n": params.ring.n, "q": params.ring.q, "t": params.t},
        "fresh_noise_bound": params.fresh_noise_bound,
        "max_inner_product_length": max_inner_product_length(params),
        "seed": config.seed,
        "digest": digest,
    }
