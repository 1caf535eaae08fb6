"""Deterministic in-process message bus modelling pairwise secure channels.

Channels are confidential and authentic by construction: only the bus can
move bytes between endpoints.  Every delivered envelope is appended to the
bus transcript, so the transcript holds every byte any party received.

Frames on the wire:

    [u32 body length][u8 kind][body]          (little-endian)

Canonical transcript bytes, per envelope, for digests:

    [u16 len][sender][u16 len][recipient][u64 seq][frame]

Usage::

    bus = MessageBus(seed=7)
    bus.register("alice"); bus.register("bob")
    bus.send("alice", "bob", PayloadKind.CIPHERTEXT, body)
    env = bus.recv("bob", "alice", PayloadKind.CIPHERTEXT)
    bus.digest()
"""

from __future__ import annotations

import hashlib
import logging
import struct
import threading
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from beaver_forge.constants import DOMAIN_BUS, PayloadKind
from beaver_forge.errors import (
    ChannelTimeoutError,
    FramingError,
    MalformedMessageError,
    UnregisteredEndpointError,
)
from beaver_forge.models.transport import Envelope, Transcript
from beaver_forge.seeding import derive_rng

logger = logging.getLogger(__name__)

_FRAME_HEADER = struct.Struct("<IB")
_U16 = struct.Struct("<H")
_U64 = struct.Struct("<Q")


# ---------------------------------------------------------------------------
# Framing
# ---------------------------------------------------------------------------

def frame(kind: PayloadKind, body: bytes) -> bytes:
    """Length-prefixed frame for one payload."""
    return _FRAME_HEADER.pack(len(body), int(kind)) + body


def unframe(data: bytes) -> tuple[PayloadKind, bytes]:
    """Inverse of :func:`frame`; never returns a body under the wrong kind."""
    if len(data) < _FRAME_HEADER.size:
        raise FramingError(f"truncated frame: {len(data)} bytes, header needs {_FRAME_HEADER.size}")
    length, code = _FRAME_HEADER.unpack_from(data)
    try:
        kind = PayloadKind(code)
    except ValueError:
        raise FramingError(f"unknown payload kind {code}") from None
    body = data[_FRAME_HEADER.size:]
    if len(body) < length:
        raise FramingError(f"truncated frame: header says {length} body bytes, got {len(body)}")
    if len(body) > length:
        raise FramingError(f"length mismatch: header says {length} body bytes, got {len(body)}")
    return kind, bytes(body)


def canonical_bytes(env: Envelope) -> bytes:
    """Byte record hashed into the transcript digest for one envelope."""
    sender = env.sender.encode("utf-8")
    recipient = env.recipient.encode("utf-8")
    return (
        _U16.pack(len(sender)) + sender
        + _U16.pack(len(recipient)) + recipient
        + _U64.pack(env.seq)
        + frame(env.kind, env.payload)
    )


def transcript_digest(envelopes: Iterable[Envelope]) -> str:
    """SHA-256 hex digest of the canonical byte stream."""
    h = hashlib.sha256()
    for env in envelopes:
        h.update(canonical_bytes(env))
    return h.hexdigest()


# ---------------------------------------------------------------------------
# Fault injection
# ---------------------------------------------------------------------------

@dataclass
class DropRule:
    """Drop matching messages.  ``None`` fields match anything.

    The first ``skip`` matches pass, the next ``times`` are dropped.
    """

    sender: str | None = None
    recipient: str | None = None
    kind: PayloadKind | None = None
    skip: int = 0
    times: int = 1
    _seen: int = field(default=0, repr=False)

    def should_drop(self, sender: str, recipient: str, kind: PayloadKind) -> bool:
        """Count a matching message and report whether it falls in the drop window."""
        if self.sender is not None and self.sender != sender:
            return False
        if self.recipient is not None and self.recipient != recipient:
            return False
        if self.kind is not None and self.kind != kind:
            return False
        self._seen += 1
        return self.skip < self._seen <= self.skip + self.times


@dataclass
class FaultPlan:
    """Set of drop rules applied at send time."""

    drops: list[DropRule] = field(default_factory=list)

    def should_drop(self, sender: str, recipient: str, kind: PayloadKind) -> bool:
        # Every rule sees every message so occurrence counters stay exact.
        hits = [rule.should_drop(sender, recipient, kind) for rule in self.drops]
        return any(hits)


# ---------------------------------------------------------------------------
# Bus
# ---------------------------------------------------------------------------

class MessageBus:
    """Single logical scheduler for all simulated channels.

    Endpoints may be driven from several threads; queue mutations happen
    under one lock so delivery order stays centralized.
    """

    def __init__(self, seed: int = 0, faults: FaultPlan | None = None) -> None:
        self.seed = seed
        self.faults = faults or FaultPlan()
        self._rng = derive_rng(seed, DOMAIN_BUS)
        self._endpoints: list[str] = []
        self._queues: dict[tuple[str, str], deque[Envelope]] = defaultdict(deque)
        self._next_seq: dict[tuple[str, str], int] = defaultdict(int)
        self._lock = threading.Lock()
        self.transcript = Transcript(seed=seed)
        self.dropped: list[Envelope] = []
        self.bytes_sent: dict[str, int] = defaultdict(int)
        self.bytes_received: dict[str, int] = defaultdict(int)

    # --- endpoints ---

    def register(self, endpoint: str) -> None:
        """Add an endpoint; registering twice is a no-op."""
        with self._lock:
            if endpoint not in self._endpoints:
                self._endpoints.append(endpoint)

    def register_all(self, endpoints: Iterable[str]) -> None:
        """Register each endpoint in order.  Order fixes the default schedule."""
        for endpoint in endpoints:
            self.register(endpoint)

    @property
    def endpoints(self) -> list[str]:
        """Registered endpoints in registration order."""
        return list(self._endpoints)

    def _require(self, *endpoints: str) -> None:
        for endpoint in endpoints:
            if endpoint not in self._endpoints:
                raise UnregisteredEndpointError(f"endpoint {endpoint!r} is not registered")

    # --- messaging ---

    def send(self, sender: str, recipient: str, kind: PayloadKind, payload: bytes) -> Envelope:
        """Queue ``payload`` on the sender->recipient channel (FIFO)."""
        self._require(sender, recipient)
        with self._lock:
            pair = (sender, recipient)
            seq = self._next_seq[pair]
            self._next_seq[pair] = seq + 1
            env = Envelope(sender=sender, recipient=recipient, seq=seq, kind=kind, payload=payload)
            self.bytes_sent[sender] += _FRAME_HEADER.size + len(payload)
            if self.faults.should_drop(sender, recipient, kind):
                self.dropped.append(env)
                logger.warning("dropped %s %s->%s seq=%d", kind.name, sender, recipient, seq)
                return env
            self._queues[pair].append(env)
        logger.debug("send %s %s->%s seq=%d (%d bytes)", kind.name, sender, recipient, seq, len(payload))
        return env

    def recv(self, recipient: str, sender: str, kind: PayloadKind | None = None) -> Envelope:
        """Deliver the oldest pending sender->recipient envelope.

        A kind mismatch raises ``MalformedMessageError`` and leaves the
        envelope queued.  An empty channel raises ``ChannelTimeoutError``:
        with no clock, a missing message is indistinguishable from a
        dropped one.
        """
        self._require(sender, recipient)
        with self._lock:
            queue = self._queues[(sender, recipient)]
            if not queue:
                raise ChannelTimeoutError(f"no message pending on {sender}->{recipient}")
            env = queue[0]
            if kind is not None and env.kind != kind:
                raise MalformedMessageError(
                    f"expected {kind.name} on {sender}->{recipient}, got {env.kind.name}"
                )
            queue.popleft()
            self.transcript.envelopes.append(env)
            self.bytes_received[recipient] += _FRAME_HEADER.size + len(env.payload)
        return env

    def pending(self, recipient: str | None = None) -> int:
        """Queued, undelivered envelopes for ``recipient`` (all recipients by default)."""
        with self._lock:
            return sum(
                len(q) for (_, to), q in self._queues.items()
                if recipient is None or to == recipient
            )

    def preload(self, transcript: Transcript) -> None:
        """Queue every envelope of a recorded transcript for replay."""
        with self._lock:
            for env in transcript.envelopes:
                for endpoint in (env.sender, env.recipient):
                    if endpoint not in self._endpoints:
                        self._endpoints.append(endpoint)
                self._queues[(env.sender, env.recipient)].append(env)

    # --- scheduling ---

    def schedule(self, endpoints: Sequence[str] | None = None) -> list[str]:
        """Round-robin order for one round, rotated by a seeded offset."""
        order = list(endpoints if endpoints is not None else self._endpoints)
        if not order:
            return order
        offset = int(self._rng.integers(len(order)))
        return order[offset:] + order[:offset]

    # --- transcript ---

    def digest(self) -> str:
        """Digest of everything delivered so far; see :func:`transcript_digest`."""
        return transcript_digest(self.transcript.envelopes)
