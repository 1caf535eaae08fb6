"""Deterministic RNG streams derived from one master seed.

Every consumer (key generation, each triple run, each dispense, the online
phase, ...) gets its own ``numpy.random.Generator`` derived by keyed domain
separation: ``SeedSequence(entropy=master, spawn_key=(domain_key, *index))``.
Streams therefore do not depend on scheduling or on the worker count.
"""

from __future__ import annotations

import hashlib

import numpy as np

from beaver_forge.errors import ParameterError


def domain_key(domain: str) -> int:
    """32-bit integer tag for a domain label."""
    return int.from_bytes(hashlib.sha256(domain.encode("utf-8")).digest()[:4], "little")


def derive_rng(master_seed: int, domain: str, *index: int) -> np.random.Generator:
    """Generator for ``domain`` (and optional integer sub-indices) under ``master_seed``."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(domain_key(domain), *index))
    return np.random.default_rng(seq)


def parse_seed(text: str) -> int:
    """Parse a hex master seed such as ``"c0ffee"`` or ``"0xC0FFEE"``."""
    cleaned = text.strip().lower()
    if cleaned.startswith("0x"):
        cleaned = cleaned[2:]
    if not cleaned:
        raise ParameterError("empty seed")
    try:
        return int(cleaned, 16)
    except ValueError:
        raise ParameterError(f"seed must be hexadecimal, got {text!r}") from None


def format_seed(seed: int) -> str:
    return f"{seed:x}"


def fresh_seed() -> int:
    """OS-entropy master seed, for runs that did not pin ``--seed``."""
    return int(np.random.SeedSequence().entropy)
