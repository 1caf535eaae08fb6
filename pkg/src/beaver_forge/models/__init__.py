"""Public model re-exports for beaver_forge.

Consumers should import from ``beaver_forge.models`` rather than
reaching into sub-modules directly.
"""

# --- Enums ---
from beaver_forge.models.enums import DeliveryStatus, MaskingMode, Party, Phase

# --- Parameters ---
from beaver_forge.models.params import AheParams, RingParams

# --- Online phase ---
from beaver_forge.models.spdz import DemoReport, OpenedValue, ShareDict

# --- Transport ---
from beaver_forge.models.transport import Envelope, Transcript

# --- Triples ---
from beaver_forge.models.triple import (
    DeliveryReceipt,
    ShareSplit,
    SspInputs,
    TripleShare,
)

__all__ = [
    "DeliveryStatus",
    "MaskingMode",
    "Party",
    "Phase",
    "AheParams",
    "RingParams",
    "DemoReport",
    "OpenedValue",
    "ShareDict",
    "Envelope",
    "Transcript",
    "DeliveryReceipt",
    "ShareSplit",
    "SspInputs",
    "TripleShare",
]
