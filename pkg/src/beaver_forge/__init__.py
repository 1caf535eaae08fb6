"""beaver_forge: Beaver triples from additive HE, dispensed to SPDZ servers.

Public API:
    RingParams / AheParams - validated parameter sets, defaults filled in
    RingElement            - element of Z_q[x]/(x^n+1), centered coefficients
    keygen / encrypt / decrypt - additive-only homomorphic encryption
    ProtocolTripleGenerator - real two-party triple generation
    IdealTripleGenerator   - trusted-dealer oracle with the same interface
    run_ssp                - shared scalar product on caller inputs
    Dispenser / MpcServer  - split shares and deliver them to l servers
    OnlineSession          - m-party online phase with Beaver multiplication
    TriplePool             - ready triples drawn from server vaults
    MessageBus             - deterministic in-process secure channels

Interfaces:
    TripleGenerator - ABC for triple sources
    ShareJournal    - ABC for vault persistence
"""

from beaver_forge.ahe import (
    Ciphertext,
    PublicKey,
    SecretKey,
    add_ct,
    decrypt,
    encrypt,
    encrypt_zero,
    keygen,
    noise_budget,
    scalar_mul_plain,
)
from beaver_forge.dispense import (
    Dispenser,
    MpcServer,
    ServerVault,
    dispense_triple,
    make_servers,
    reconstruct,
    split_additive,
)
from beaver_forge.interfaces import ShareJournal, TripleGenerator
from beaver_forge.models import (
    AheParams,
    DemoReport,
    MaskingMode,
    Party,
    RingParams,
    SspInputs,
    TripleShare,
)
from beaver_forge.ring import RingElement
from beaver_forge.spdz import OnlineSession, TriplePool, dot_product_demo, spdz_mul_demo
from beaver_forge.transport import FaultPlan, MessageBus, frame, unframe
from beaver_forge.triplegen import (
    IdealTripleGenerator,
    ProtocolTripleGenerator,
    batch_generate,
    ideal_btg,
    ideal_ssp,
    run_ssp,
)

__all__ = [
    # Parameters & ring
    "AheParams",
    "RingParams",
    "RingElement",
    # Encryption
    "Ciphertext",
    "PublicKey",
    "SecretKey",
    "keygen",
    "encrypt",
    "encrypt_zero",
    "decrypt",
    "add_ct",
    "scalar_mul_plain",
    "noise_budget",
    # Triple generation
    "TripleGenerator",
    "IdealTripleGenerator",
    "ProtocolTripleGenerator",
    "batch_generate",
    "ideal_btg",
    "ideal_ssp",
    "run_ssp",
    "SspInputs",
    "TripleShare",
    "MaskingMode",
    "Party",
    # Dispensing
    "ShareJournal",
    "Dispenser",
    "MpcServer",
    "ServerVault",
    "dispense_triple",
    "make_servers",
    "reconstruct",
    "split_additive",
    # Online phase
    "OnlineSession",
    "TriplePool",
    "DemoReport",
    "dot_product_demo",
    "spdz_mul_demo",
    # Transport
    "MessageBus",
    "FaultPlan",
    "frame",
    "unframe",
]
