"""Share-level data models for triple generation and dispensing.

  - TripleShare: one party's additive shares (a_i, b_i, c_i) of a Beaver triple
  - SspInputs:   the two private vectors of a shared scalar product
  - ShareSplit:  one origin's sub-share triple destined for one MPC server
  - DeliveryReceipt: outcome of delivering a ShareSplit
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from beaver_forge.errors import PlaintextRangeError
from beaver_forge.models.enums import DeliveryStatus, Party


def _check_centered(value: int, t: int, name: str) -> None:
    lo, hi = -((t - 1) // 2), t // 2
    if not lo <= value <= hi:
        raise PlaintextRangeError(f"{name}={value} outside centered Z_t [{lo}, {hi}] (t={t})")


class TripleShare(BaseModel):
    """One party's shares of a Beaver triple.

    Summed over every holder of the same ``triple_id``:
    a = sum a_share, b = sum b_share, c = sum c_share = a*b (mod t).
    """

    model_config = ConfigDict(frozen=True)

    triple_id: str
    party: str  # "alice" / "bob" for two-party shares, the server id once dispensed
    a_share: int
    b_share: int
    c_share: int
    t: int

    @model_validator(mode="after")
    def _check(self) -> "TripleShare":
        for name in ("a_share", "b_share", "c_share"):
            _check_centered(getattr(self, name), self.t, name)
        return self

    @property
    def components(self) -> tuple[int, int, int]:
        return self.a_share, self.b_share, self.c_share


class SspInputs(BaseModel):
    """inp_A and inp_B of a shared scalar product over centered Z_t."""

    model_config = ConfigDict(frozen=True)

    inp_a: list[int] = Field(min_length=1)
    inp_b: list[int] = Field(min_length=1)
    t: int

    @model_validator(mode="after")
    def _check(self) -> "SspInputs":
        if len(self.inp_a) != len(self.inp_b):
            raise PlaintextRangeError(
                f"input vectors differ in length: {len(self.inp_a)} vs {len(self.inp_b)}"
            )
        for i, (x, y) in enumerate(zip(self.inp_a, self.inp_b)):
            _check_centered(x, self.t, f"inp_a[{i}]")
            _check_centered(y, self.t, f"inp_b[{i}]")
        return self

    @property
    def length(self) -> int:
        return len(self.inp_a)


class ShareSplit(BaseModel):
    """Sub-share (a_j, b_j, c_j) of one origin's triple share for server j."""

    model_config = ConfigDict(frozen=True)

    origin_party: Party
    triple_id: str
    server_index: int = Field(ge=1)
    a_j: int
    b_j: int
    c_j: int
    t: int

    @model_validator(mode="after")
    def _check(self) -> "ShareSplit":
        for name in ("a_j", "b_j", "c_j"):
            _check_centered(getattr(self, name), self.t, name)
        return self

    @property
    def components(self) -> tuple[int, int, int]:
        return self.a_j, self.b_j, self.c_j


class DeliveryReceipt(BaseModel):
    """What the origin learns after sending one ShareSplit."""

    triple_id: str
    origin_party: Party
    server_id: str
    status: DeliveryStatus
    detail: str | None = None
