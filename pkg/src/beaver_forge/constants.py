"""Constants shared across the SDK.

The default parameter set is the one used for the published encryption
benchmark.  ``DEFAULT_SIGMA`` and ``DEFAULT_TAIL_BOUND`` can be overridden
through environment variables so experiments can widen or narrow the error
distribution without code changes.
"""

from __future__ import annotations

import os
from enum import IntEnum

# --- Default parameter set ---
# n = 2^4, q a 48-bit safe prime, t a 16-bit safe prime, poly_mod = x^n + 1
DEFAULT_N = 16
DEFAULT_Q = 140737488356903
DEFAULT_T = 32843

# Error distribution chi = discrete Gaussian, truncated at tail_bound * sigma.
DEFAULT_SIGMA = float(os.getenv("BEAVER_FORGE_SIGMA", "3.2"))
DEFAULT_TAIL_BOUND = int(os.getenv("BEAVER_FORGE_TAIL_BOUND", "6"))

# Coefficients are stored as signed 64-bit integers.
MAX_MODULUS_BITS = 62

# Reference encryption rate of a pure-Python implementation
# (1e6 encryptions in about 300 s).  Informational only.
REFERENCE_ENC_PER_SEC = 1_000_000 / 300

# --- Wire format ---
CIPHERTEXT_MAGIC = b"AHE1"
PUBLIC_KEY_MAGIC = b"APK1"
SECRET_KEY_MAGIC = b"ASK1"
TRIPLE_FILE_MAGIC = b"BTR1"


class PayloadKind(IntEnum):
    """u8 kind tag carried in every transport frame."""

    CIPHERTEXT = 1
    SHARE = 2
    OPENING = 3
    RECEIPT = 4
    PUBLIC_KEY = 5


# Domain-separation labels for per-purpose RNG streams derived from one
# master seed.  Changing a label changes every derived stream.
DOMAIN_KEYGEN = "keygen"
DOMAIN_TRIPLE = "triple"
DOMAIN_DISPENSE = "dispense"
DOMAIN_ONLINE = "online"
DOMAIN_BENCH = "bench"
DOMAIN_SERVER_KEYS = "server-keys"
DOMAIN_BUS = "bus"
