"""Message-bus data models: envelopes and transcripts."""

from __future__ import annotations

from pydantic import BaseModel, Field

from beaver_forge.constants import PayloadKind


class Envelope(BaseModel):
    """One framed message on a simulated secure channel.

    ``seq`` strictly increases per (sender, recipient) pair.
    """

    sender: str
    recipient: str
    seq: int = Field(ge=0)
    kind: PayloadKind
    payload: bytes

    def to_record(self) -> dict:
        """JSON-lines export record with the payload hex-encoded."""
        return {
            "sender": self.sender,
            "recipient": self.recipient,
            "seq": self.seq,
            "kind": self.kind.name.lower(),
            "payload": self.payload.hex(),
        }

    @classmethod
    def from_record(cls, record: dict) -> "Envelope":
        return cls(
            sender=record["sender"],
            recipient=record["recipient"],
            seq=record["seq"],
            kind=PayloadKind[record["kind"].upper()],
            payload=bytes.fromhex(record["payload"]),
        )


class Transcript(BaseModel):
    """Ordered log of every delivered envelope, plus the bus seed."""

    seed: int | None = None
    envelopes: list[Envelope] = Field(default_factory=list)
