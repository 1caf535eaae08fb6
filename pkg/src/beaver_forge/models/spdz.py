"""Online-phase data models."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ShareDict(BaseModel):
    """A party's Val dictionary: value-id -> additive share in centered Z_t."""

    party_id: str
    shares: dict[str, int] = Field(default_factory=dict)


class OpenedValue(BaseModel):
    """A value made public by an opening."""

    value_id: str
    value: int
    parties: list[str]


class DemoReport(BaseModel):
    """Machine-readable result of an online-phase demo run.

    ``inputs`` and ``oracle`` are only filled when the caller asked to
    reveal the cleartext inputs.
    """

    demo: str
    parties: list[str]
    t: int
    output: int
    inputs: dict[str, list[int] | int] | None = None
    oracle: int | None = None
    matches_oracle: bool | None = None
    triples_consumed: int
    rounds: int
    bytes_sent: dict[str, int] = Field(default_factory=dict)
