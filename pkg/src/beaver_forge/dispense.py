"""Dispensing two-party triple shares to l MPC servers.

Each origin party (Alice or Bob) splits every component of its share into l
additive sub-shares and sends sub-share j to server j, sealed under server
j's own public key.  A server's vault sums what it receives from both
origins; once both have arrived the server holds an additive share of the
full triple (a, b, ab)::

    alice: (x_A, 0, s_A) = sum_j (a_Aj, b_Aj, c_Aj)
    bob:   (0, x_B, s_B) = sum_j (a_Bj, b_Bj, c_Bj)
    server j holds (a_Aj + a_Bj, b_Aj + b_Bj, c_Aj + c_Bj)

Usage::

    servers = make_servers(params, count=3, master_seed=seed)
    bus = MessageBus(seed)
    for origin, share in ((Party.ALICE, alice_share), (Party.BOB, bob_share)):
        Dispenser(origin, servers, bus, rng).dispense(share)
    reconstruct([s.vault.share(triple_id) for s in servers])
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from typing import Iterator, Protocol, Sequence

import numpy as np

from beaver_forge.ahe import PublicKey, SecretKey, decrypt, encrypt, keygen
from beaver_forge.codec import (
    decode_receipt,
    decode_sealed_subshare,
    encode_receipt,
    encode_sealed_subshare,
)
from beaver_forge.constants import DOMAIN_SERVER_KEYS, PayloadKind
from beaver_forge.errors import (
    ChannelTimeoutError,
    DuplicateDeliveryError,
    IncompleteSharesError,
    ParameterError,
    ParamsMismatchError,
    TripleReuseError,
)
from beaver_forge.interfaces import ShareJournal
from beaver_forge.models.enums import DeliveryStatus, Party
from beaver_forge.models.params import AheParams
from beaver_forge.models.triple import DeliveryReceipt, ShareSplit, TripleShare
from beaver_forge.ring import center_mod
from beaver_forge.seeding import derive_rng
from beaver_forge.transport import MessageBus

logger = logging.getLogger(__name__)


# ===================================================================
# Split / reconstruct
# ===================================================================

def split_additive(value: int, l: int, t: int, rng: np.random.Generator) -> list[int]:
    """l sub-shares: l-1 uniform in centered Z_t, the last completes the sum."""
    if l < 2:
        raise ParameterError(f"need at least 2 servers to split, got l={l}")
    lo, hi = -((t - 1) // 2), t // 2
    parts = [int(v) for v in rng.integers(lo, hi, size=l - 1, endpoint=True)]
    parts.append(center_mod(value - sum(parts), t))
    return parts


def split_share(share: TripleShare, l: int, origin: Party, rng: np.random.Generator) -> list[ShareSplit]:
    """Split each component of ``share`` independently into l ShareSplits."""
    columns = [split_additive(v, l, share.t, rng) for v in share.components]
    return [
        ShareSplit(
            origin_party=origin, triple_id=share.triple_id, server_index=j + 1,
            a_j=columns[0][j], b_j=columns[1][j], c_j=columns[2][j], t=share.t,
        )
        for j in range(l)
    ]


class _HasComponents(Protocol):
    triple_id: str
    t: int

    @property
    def components(self) -> tuple[int, int, int]: ...


def reconstruct(shares: Sequence[_HasComponents], expected: int | None = None) -> tuple[int, int, int]:
    """Component-wise centered sum of the shares of one triple.

    ``expected`` is the number of holders; fewer shares raise
    ``IncompleteSharesError``.
    """
    if not shares:
        raise IncompleteSharesError("no shares to reconstruct")
    if expected is not None and len(shares) != expected:
        raise IncompleteSharesError(
            f"triple {shares[0].triple_id!r}: {len(shares)} of {expected} shares present"
        )
    ids = {s.triple_id for s in shares}
    if len(ids) != 1:
        raise IncompleteSharesError(f"shares belong to different triples: {sorted(ids)}")
    moduli = {s.t for s in shares}
    if len(moduli) != 1:
        raise ParamsMismatchError(f"shares use different moduli: {sorted(moduli)}")
    t = moduli.pop()
    a, b, c = (center_mod(sum(s.components[k] for s in shares), t) for k in range(3))
    return a, b, c


def is_valid_triple(a: int, b: int, c: int, t: int) -> bool:
    return center_mod(a * b - c, t) == 0


# ===================================================================
# Server vault
# ===================================================================

class MemoryJournal(ShareJournal):
    """In-process journal."""

    def __init__(self) -> None:
        self._records: list[dict] = []

    def append(self, record: dict) -> None:
        self._records.append(dict(record))

    def records(self) -> Iterator[dict]:
        return iter(list(self._records))


@dataclass
class _Entry:
    parts: dict[Party, tuple[int, int, int]] = field(default_factory=dict)

    @property
    def ready(self) -> bool:
        return len(self.parts) == len(Party)


class ServerVault:
    """One server's store of dispensed sub-shares.

    Access is serialized by a lock.  A triple is ready only after both
    origins' sub-shares arrived, and each (triple_id, origin) is accepted
    once.  Consumed triples stay recorded so they are never served again.
    """

    def __init__(self, server_id: str, t: int, journal: ShareJournal | None = None) -> None:
        self.server_id = server_id
        self.t = t
        self.journal = journal
        self._entries: dict[str, _Entry] = {}
        self._consumed: set[str] = set()
        self._lock = threading.Lock()

    def deposit(self, split: ShareSplit) -> None:
        with self._lock:
            self._apply_deposit(split.triple_id, Party(split.origin_party), split.components, split.t)
            if self.journal is not None:
                self.journal.append({
                    "event": "deposit",
                    "triple_id": split.triple_id,
                    "from": Party(split.origin_party).value,
                    "a_j": split.a_j, "b_j": split.b_j, "c_j": split.c_j,
                })

    def _apply_deposit(self, triple_id: str, origin: Party, parts: tuple[int, int, int], t: int) -> None:
        if t != self.t:
            raise ParamsMismatchError(f"{self.server_id}: sub-share uses t={t}, vault uses t={self.t}")
        if triple_id in self._consumed:
            raise DuplicateDeliveryError(f"{self.server_id}: triple {triple_id!r} was already consumed")
        entry = self._entries.setdefault(triple_id, _Entry())
        if origin in entry.parts:
            raise DuplicateDeliveryError(
                f"{self.server_id}: triple {triple_id!r} from {origin.value} delivered twice"
            )
        entry.parts[origin] = parts

    def is_ready(self, triple_id: str) -> bool:
        with self._lock:
            entry = self._entries.get(triple_id)
            return entry is not None and entry.ready

    def ready_ids(self) -> list[str]:
        """Ready, unconsumed triple ids in arrival order."""
        with self._lock:
            return [tid for tid, e in self._entries.items() if e.ready]

    def pending_ids(self) -> list[str]:
        with self._lock:
            return [tid for tid, e in self._entries.items() if not e.ready]

    @property
    def consumed_ids(self) -> set[str]:
        with self._lock:
            return set(self._consumed)

    def share(self, triple_id: str) -> TripleShare:
        """This server's share of a ready triple."""
        with self._lock:
            return self._share_locked(triple_id)

    def _share_locked(self, triple_id: str) -> TripleShare:
        if triple_id in self._consumed:
            raise TripleReuseError(f"{self.server_id}: triple {triple_id!r} already consumed")
        entry = self._entries.get(triple_id)
        if entry is None or not entry.ready:
            have = sorted(p.value for p in entry.parts) if entry else []
            raise IncompleteSharesError(
                f"{self.server_id}: triple {triple_id!r} not ready (have {have})"
            )
        sums = [center_mod(sum(p[k] for p in entry.parts.values()), self.t) for k in range(3)]
        return TripleShare(
            triple_id=triple_id, party=self.server_id,
            a_share=sums[0], b_share=sums[1], c_share=sums[2], t=self.t,
        )

    def consume(self, triple_id: str) -> TripleShare:
        """Return the share and retire the triple for good."""
        with self._lock:
            share = self._share_locked(triple_id)
            del self._entries[triple_id]
            self._consumed.add(triple_id)
            if self.journal is not None:
                self.journal.append({"event": "consume", "triple_id": triple_id})
            return share

    @classmethod
    def load(cls, server_id: str, t: int, journal: ShareJournal) -> "ServerVault":
        """Rebuild a vault by replaying its journal; new events go to the same journal."""
        vault = cls(server_id, t)
        for record in journal.records():
            event = record.get("event", "deposit")
            if event == "deposit":
                vault._apply_deposit(
                    record["triple_id"], Party(record["from"]),
                    (int(record["a_j"]), int(record["b_j"]), int(record["c_j"])), t,
                )
            elif event == "consume":
                vault._entries.pop(record["triple_id"], None)
                vault._consumed.add(record["triple_id"])
            else:
                raise IncompleteSharesError(f"{server_id}: unknown journal event {event!r}")
        vault.journal = journal
        return vault

    def __len__(self) -> int:
        return len(self._entries)


# ===================================================================
# Servers and dispenser
# ===================================================================

class MpcServer:
    """An MPC server endpoint: its own AHE key pair plus a vault."""

    def __init__(
        self, server_id: str, pk: PublicKey, sk: SecretKey, vault: ServerVault, *, index: int = 1
    ) -> None:
        self.server_id = server_id
        self.index = index
        self.pk = pk
        self._sk = sk
        self.vault = vault

    @property
    def params(self) -> AheParams:
        return self.pk.params

    def serve_one(self, bus: MessageBus, origin: Party) -> DeliveryStatus:
        """Take one SHARE frame from ``origin``, unseal, deposit, answer with a RECEIPT."""
        env = bus.recv(self.server_id, origin.value, PayloadKind.SHARE)
        triple_id, claimed, sealed = decode_sealed_subshare(env.payload, self.params)
        a_j, b_j, c_j = (decrypt(self._sk, ct) for ct in sealed)
        split = ShareSplit(
            origin_party=claimed, triple_id=triple_id,
            server_index=self.index, a_j=a_j, b_j=b_j, c_j=c_j, t=self.vault.t,
        )
        try:
            self.vault.deposit(split)
            status = DeliveryStatus.DELIVERED
        except DuplicateDeliveryError as exc:
            logger.warning("%s", exc)
            status = DeliveryStatus.REJECTED
        bus.send(self.server_id, origin.value, PayloadKind.RECEIPT, encode_receipt(triple_id, self.server_id, status))
        return status


def server_id_for(index: int) -> str:
    return f"server-{index}"


def make_servers(
    params: AheParams,
    count: int,
    master_seed: int,
    *,
    journals: Sequence[ShareJournal] | None = None,
) -> list[MpcServer]:
    """``count`` servers with keys derived from the master seed.

    With ``journals`` the vaults are rebuilt from them (one per server).
    """
    if count < 2:
        raise ParameterError(f"need at least 2 servers, got {count}")
    if journals is not None and len(journals) != count:
        raise ParameterError(f"{len(journals)} journals for {count} servers")
    servers = []
    for j in range(1, count + 1):
        sid = server_id_for(j)
        pk, sk = keygen(params, derive_rng(master_seed, DOMAIN_SERVER_KEYS, j))
        if journals is not None:
            vault = ServerVault.load(sid, params.t, journals[j - 1])
        else:
            vault = ServerVault(sid, params.t)
        servers.append(MpcServer(sid, pk, sk, vault, index=j))
    return servers


class Dispenser:
    """Origin-side dispensing over the bus with retry of failed deliveries.

    Delivered sub-shares are forgotten immediately; only undelivered ones
    are kept, for :meth:`retry_pending`.
    """

    def __init__(
        self,
        origin: Party,
        servers: Sequence[MpcServer],
        bus: MessageBus,
        rng: np.random.Generator,
    ) -> None:
        if len(servers) < 2:
            raise ParameterError(f"need at least 2 servers, got {len(servers)}")
        self.origin = origin
        self.servers = list(servers)
        self.bus = bus
        self._rng = rng
        self._pending: dict[tuple[str, str], ShareSplit] = {}
        bus.register(origin.value)
        bus.register_all(s.server_id for s in self.servers)

    @property
    def pending(self) -> list[tuple[str, str]]:
        """(triple_id, server_id) pairs awaiting a successful delivery."""
        return list(self._pending)

    def dispense(self, share: TripleShare) -> list[DeliveryReceipt]:
        splits = split_share(share, len(self.servers), self.origin, self._rng)
        return [self._deliver(split, server) for split, server in zip(splits, self.servers)]

    def retry_pending(self) -> list[DeliveryReceipt]:
        by_id = {s.server_id: s for s in self.servers}
        items = list(self._pending.items())
        self._pending.clear()
        receipts = [self._deliver(split, by_id[sid]) for (_, sid), split in items]
        if items:
            logger.info("%s retried %d deliveries, %d still pending", self.origin.value, len(items), len(self._pending))
        return receipts

    def _deliver(self, split: ShareSplit, server: MpcServer) -> DeliveryReceipt:
        sealed = [encrypt(server.pk, v, self._rng) for v in split.components]
        self.bus.send(
            self.origin.value, server.server_id, PayloadKind.SHARE,
            encode_sealed_subshare(split.triple_id, self.origin, sealed),
        )
        try:
            server.serve_one(self.bus, self.origin)
            env = self.bus.recv(self.origin.value, server.server_id, PayloadKind.RECEIPT)
        except ChannelTimeoutError as exc:
            logger.warning("%s -> %s: %s; will retry", self.origin.value, server.server_id, exc)
            self._pending[(split.triple_id, server.server_id)] = split
            return DeliveryReceipt(
                triple_id=split.triple_id, origin_party=self.origin,
                server_id=server.server_id, status=DeliveryStatus.RETRY, detail=str(exc),
            )
        triple_id, server_id, status = decode_receipt(env.payload)
        return DeliveryReceipt(
            triple_id=triple_id, origin_party=self.origin, server_id=server_id, status=status,
        )


def dispense_triple(
    share: TripleShare,
    origin: Party,
    servers: Sequence[MpcServer],
    bus: MessageBus,
    rng: np.random.Generator,
) -> list[DeliveryReceipt]:
    """One-shot dispensing of a single share; failures are reported, not retried."""
    return Dispenser(origin, servers, bus, rng).dispense(share)
