"""Enumerations shared by the protocol modules."""

import enum


class Party(str, enum.Enum):
    """Origin role of a two-party triple share."""

    ALICE = "alice"
    BOB = "bob"


class Phase(str, enum.Enum):
    """Phase of a shared-scalar-product state machine.

    Transitions:
        Alice: round1 -> round3 -> done
        Bob:   round2 -> done
    """

    ROUND1 = "round1"
    ROUND2 = "round2"
    ROUND3 = "round3"
    DONE = "done"


class MaskingMode(str, enum.Enum):
    """How Bob masks the homomorphic inner product.

    ``aggregate`` sums all scaled ciphertexts and adds a single mask;
    ``per_element`` masks every product separately and replies with l
    ciphertexts.
    """

    AGGREGATE = "aggregate"
    PER_ELEMENT = "per_element"


class DeliveryStatus(str, enum.Enum):
    """Outcome of delivering one sub-share triple to one server."""

    DELIVERED = "delivered"
    RETRY = "retry"
    REJECTED = "rejected"
