"""SPDZ-style online phase over additive shares in centered Z_t.

Every party keeps a Val dictionary (value id -> share).  Linear operations
are local; an opening broadcasts shares so every party learns the value.
Multiplication consumes one Beaver triple (a, b, c = ab)::

    rho = open([x] - [a]),  eps = open([y] - [b])
    [xy] = [c] + eps*[a] + rho*[b] + rho*eps     (rho*eps added by party 0)

All messages go over a :class:`MessageBus`, so a session's transcript is
byte-identical for fixed seeds.

Usage::

    session = OnlineSession(["server-1", "server-2", "server-3"], t, rng=rng)
    x = session.share_input("server-1", 3)
    y = session.share_input("server-2", 4)
    xy = session.beaver_mul(x, y, pool.take())
    session.open(xy).value   # 12
"""

from __future__ import annotations

import itertools
import logging
from typing import Mapping, Sequence

import numpy as np

from beaver_forge.codec import decode_value_share, encode_value_share
from beaver_forge.constants import PayloadKind
from beaver_forge.dispense import MpcServer
from beaver_forge.errors import (
    IncompleteSharesError,
    MalformedMessageError,
    OfflinePhaseDepletedError,
    ParamsMismatchError,
    PlaintextRangeError,
    ProtocolStateError,
    TripleReuseError,
)
from beaver_forge.models.spdz import DemoReport, OpenedValue, ShareDict
from beaver_forge.models.triple import TripleShare
from beaver_forge.ring import center_mod
from beaver_forge.transport import MessageBus

logger = logging.getLogger(__name__)


# ===================================================================
# Triple pool
# ===================================================================

class TriplePool:
    """Ready triples common to every server vault, handed out once each."""

    def __init__(self, servers: Sequence[MpcServer]) -> None:
        if not servers:
            raise ProtocolStateError("triple pool needs at least one server")
        self.servers = list(servers)
        self.taken = 0

    def ready_ids(self) -> list[str]:
        first, *rest = (s.vault.ready_ids() for s in self.servers)
        common = set(first).intersection(*rest)
        return [tid for tid in first if tid in common]

    def available(self) -> int:
        return len(self.ready_ids())

    def take(self) -> dict[str, TripleShare]:
        """Consume the oldest ready triple in every vault; party id -> share."""
        ids = self.ready_ids()
        if not ids:
            raise OfflinePhaseDepletedError(
                f"offline phase depleted: no ready triples left after {self.taken} taken"
            )
        tid = ids[0]
        shares = {s.server_id: s.vault.consume(tid) for s in self.servers}
        self.taken += 1
        return shares


# ===================================================================
# Online session
# ===================================================================

class OnlineSession:
    """m simulated parties evaluating a circuit on additive shares."""

    def __init__(
        self,
        parties: Sequence[str],
        t: int,
        *,
        rng: np.random.Generator,
        bus: MessageBus | None = None,
    ) -> None:
        if len(parties) < 2:
            raise ProtocolStateError(f"need at least 2 parties, got {len(parties)}")
        if len(set(parties)) != len(parties):
            raise ProtocolStateError(f"duplicate party ids: {list(parties)}")
        self.parties = list(parties)
        self.t = t
        self.bus = bus if bus is not None else MessageBus()
        self.bus.register_all(self.parties)
        self._rng = rng
        self.vals: dict[str, ShareDict] = {p: ShareDict(party_id=p) for p in self.parties}
        self.opened: list[OpenedValue] = []
        self.rounds = 0
        self.triples_consumed = 0
        self._used_triples: set[str] = set()
        self._ids = itertools.count()

    # --- helpers ---

    def _new_id(self, prefix: str) -> str:
        return f"{prefix}{next(self._ids)}"

    def _shares(self, value_id: str) -> dict[str, int]:
        missing = [p for p in self.parties if value_id not in self.vals[p].shares]
        if missing:
            raise IncompleteSharesError(f"value {value_id!r} has no share at {missing}")
        return {p: self.vals[p].shares[value_id] for p in self.parties}

    def _store(self, value_id: str, shares: Mapping[str, int]) -> str:
        for p in self.parties:
            self.vals[p].shares[value_id] = center_mod(shares[p], self.t)
        return value_id

    def _check_range(self, value: int, what: str) -> None:
        lo, hi = -((self.t - 1) // 2), self.t // 2
        if not lo <= value <= hi:
            raise PlaintextRangeError(f"{what}={value} outside centered Z_t [{lo}, {hi}]")

    # --- input sharing ---

    def share_input(self, owner: str, value: int, value_id: str | None = None) -> str:
        """Owner deals a uniform additive sharing of ``value`` over the bus."""
        if owner not in self.vals:
            raise ProtocolStateError(f"unknown party {owner!r}")
        self._check_range(value, "input")
        if value_id is not None and any(value_id in v.shares for v in self.vals.values()):
            raise ProtocolStateError(f"value id {value_id!r} is already in use")
        value_id = value_id or self._new_id("in")
        lo, hi = -((self.t - 1) // 2), self.t // 2
        others = [p for p in self.parties if p != owner]
        draws = self._rng.integers(lo, hi, size=len(others), endpoint=True)
        shares = {p: int(v) for p, v in zip(others, draws)}
        shares[owner] = center_mod(value - sum(shares.values()), self.t)
        for p in others:
            self.bus.send(owner, p, PayloadKind.SHARE, encode_value_share(value_id, shares[p]))
        for p in others:
            got_id, got = decode_value_share(self.bus.recv(p, owner, PayloadKind.SHARE).payload)
            if got_id != value_id:
                raise MalformedMessageError(f"{p} expected input {value_id!r}, got {got_id!r}")
            self.vals[p].shares[value_id] = got
        self.vals[owner].shares[value_id] = shares[owner]
        return value_id

    def share_zero(self, value_id: str | None = None) -> str:
        """Trivial sharing of 0 (every share 0); no communication."""
        return self._store(value_id or self._new_id("zero"), {p: 0 for p in self.parties})

    # --- local linear operations ---

    def add_shares(self, x_id: str, y_id: str, out_id: str | None = None) -> str:
        xs, ys = self._shares(x_id), self._shares(y_id)
        return self._store(out_id or self._new_id("add"), {p: xs[p] + ys[p] for p in self.parties})

    def sub_shares(self, x_id: str, y_id: str, out_id: str | None = None) -> str:
        xs, ys = self._shares(x_id), self._shares(y_id)
        return self._store(out_id or self._new_id("sub"), {p: xs[p] - ys[p] for p in self.parties})

    def scalar_mul_shares(self, k: int, x_id: str, out_id: str | None = None) -> str:
        xs = self._shares(x_id)
        return self._store(out_id or self._new_id("mul"), {p: k * xs[p] for p in self.parties})

    def add_const(self, x_id: str, const: int, out_id: str | None = None) -> str:
        """Add a public constant; only the lowest-indexed party offsets its share."""
        xs = self._shares(x_id)
        shares = dict(xs)
        shares[self.parties[0]] = xs[self.parties[0]] + const
        return self._store(out_id or self._new_id("addc"), shares)

    # --- openings ---

    def open_many(self, value_ids: Sequence[str]) -> list[OpenedValue]:
        """Open several values in one broadcast round."""
        shares = {vid: self._shares(vid) for vid in value_ids}
        for sender in self.bus.schedule(self.parties):
            for recipient in self.parties:
                if recipient == sender:
                    continue
                for vid in value_ids:
                    self.bus.send(sender, recipient, PayloadKind.OPENING, encode_value_share(vid, shares[vid][sender]))

        views: dict[str, dict[str, int]] = {}
        for recipient in self.parties:
            totals = {vid: shares[vid][recipient] for vid in value_ids}
            for sender in self.parties:
                if sender == recipient:
                    continue
                for vid in value_ids:
                    got_id, got = decode_value_share(self.bus.recv(recipient, sender, PayloadKind.OPENING).payload)
                    if got_id != vid:
                        raise MalformedMessageError(f"{recipient} expected opening of {vid!r}, got {got_id!r}")
                    totals[vid] += got
            views[recipient] = {vid: center_mod(v, self.t) for vid, v in totals.items()}
        self.rounds += 1

        result = []
        for vid in value_ids:
            seen = {views[p][vid] for p in self.parties}
            if len(seen) != 1:
                raise ProtocolStateError(f"parties disagree on opening of {vid!r}: {sorted(seen)}")
            opened = OpenedValue(value_id=vid, value=seen.pop(), parties=list(self.parties))
            self.opened.append(opened)
            result.append(opened)
        return result

    def open(self, value_id: str) -> OpenedValue:
        return self.open_many([value_id])[0]

    # --- multiplication ---

    def _check_triple(self, triple: Mapping[str, TripleShare]) -> str:
        """Validate one triple against the session without consuming it."""
        if set(triple) != set(self.parties):
            raise ProtocolStateError(
                f"triple shares held by {sorted(triple)}, session parties are {sorted(self.parties)}"
            )
        ids = {s.triple_id for s in triple.values()}
        if len(ids) != 1:
            raise ProtocolStateError(f"triple shares belong to different triples: {sorted(ids)}")
        tid = ids.pop()
        if any(s.t != self.t for s in triple.values()):
            raise ParamsMismatchError(f"triple {tid!r} is not over t={self.t}")
        if tid in self._used_triples:
            raise TripleReuseError(f"triple {tid!r} was already consumed")
        return tid

    def _install_triple(self, tid: str, triple: Mapping[str, TripleShare]) -> tuple[str, str, str]:
        self._used_triples.add(tid)
        self.triples_consumed += 1
        a = self._store(f"{tid}/a", {p: triple[p].a_share for p in self.parties})
        b = self._store(f"{tid}/b", {p: triple[p].b_share for p in self.parties})
        c = self._store(f"{tid}/c", {p: triple[p].c_share for p in self.parties})
        return a, b, c

    def beaver_mul_many(
        self,
        pairs: Sequence[tuple[str, str]],
        triples: Sequence[Mapping[str, TripleShare]],
    ) -> list[str]:
        """Multiply several pairs, opening every rho and eps in one round.

        Every triple and operand is checked before any triple is marked
        used, so a rejected call leaves the session unchanged.
        """
        if len(pairs) != len(triples):
            raise ProtocolStateError(f"{len(pairs)} products need {len(pairs)} triples, got {len(triples)}")
        tids = [self._check_triple(tr) for tr in triples]
        if len(set(tids)) != len(tids):
            raise TripleReuseError(f"triple used twice in one call: {tids}")
        for x_id, y_id in pairs:
            self._shares(x_id)
            self._shares(y_id)

        installed = [self._install_triple(tid, tr) for tid, tr in zip(tids, triples)]
        masked = []
        for (x_id, y_id), (a, b, _) in zip(pairs, installed):
            masked += [self.sub_shares(x_id, a), self.sub_shares(y_id, b)]
        values = [o.value for o in self.open_many(masked)]

        outputs = []
        for k, (a, b, c) in enumerate(installed):
            rho, eps = values[2 * k], values[2 * k + 1]
            sa, sb, sc = self._shares(a), self._shares(b), self._shares(c)
            product = {p: sc[p] + eps * sa[p] + rho * sb[p] for p in self.parties}
            product[self.parties[0]] += rho * eps
            outputs.append(self._store(self._new_id("prod"), product))
        return outputs

    def beaver_mul(self, x_id: str, y_id: str, triple: Mapping[str, TripleShare]) -> str:
        return self.beaver_mul_many([(x_id, y_id)], [triple])[0]


# ===================================================================
# Demos
# ===================================================================

def _report(session: OnlineSession, demo: str, output: int, oracle: int, inputs: dict, reveal: bool) -> DemoReport:
    return DemoReport(
        demo=demo,
        parties=session.parties,
        t=session.t,
        output=output,
        inputs=inputs if reveal else None,
        oracle=oracle if reveal else None,
        matches_oracle=(output == oracle) if reveal else None,
        triples_consumed=session.triples_consumed,
        rounds=session.rounds,
        bytes_sent={p: session.bus.bytes_sent.get(p, 0) for p in session.parties},
    )


def spdz_mul_demo(session: OnlineSession, pool: TriplePool, x: int, y: int, *, reveal: bool = False) -> DemoReport:
    """Party 0 inputs x, party 1 inputs y; open x*y."""
    x_id = session.share_input(session.parties[0], x)
    y_id = session.share_input(session.parties[1], y)
    session.rounds += 1
    out = session.open(session.beaver_mul(x_id, y_id, pool.take())).value
    oracle = center_mod(x * y, session.t)
    logger.info("spdz-mul opened %d with %d parties", out, len(session.parties))
    return _report(session, "spdz-mul", out, oracle, {"x": x, "y": y}, reveal)


def dot_product_demo(
    session: OnlineSession,
    pool: TriplePool,
    weights: Sequence[int],
    bias: int,
    x: Sequence[int],
    *,
    reveal: bool = False,
) -> DemoReport:
    """Open (b, w) . (1, x) with (b, w) from party 0 and x from party 1.

    The constant 1 is a shared value built by ``add_const`` on a zero
    sharing, so the bias costs one multiplication and the run consumes
    exactly len(x) + 1 triples.
    """
    if len(weights) != len(x):
        raise ProtocolStateError(f"weights have length {len(weights)}, inputs have length {len(x)}")
    if not x:
        raise ProtocolStateError("dot product needs at least one input")
    needed = len(x) + 1
    if pool.available() < needed:
        raise OfflinePhaseDepletedError(
            f"offline phase depleted: dot product needs {needed} triples, {pool.available()} ready"
        )
    owner_w, owner_x = session.parties[0], session.parties[1]
    b_id = session.share_input(owner_w, bias)
    w_ids = [session.share_input(owner_w, w) for w in weights]
    x_ids = [session.share_input(owner_x, v) for v in x]
    session.rounds += 1
    one_id = session.add_const(session.share_zero(), 1)

    pairs = [(b_id, one_id)] + list(zip(w_ids, x_ids))
    products = session.beaver_mul_many(pairs, [pool.take() for _ in pairs])
    acc = products[0]
    for p in products[1:]:
        acc = session.add_shares(acc, p)
    out = session.open(acc).value

    oracle = center_mod(bias + sum(w * v for w, v in zip(weights, x)), session.t)
    logger.info("dot-product of length %d opened with %d triples", len(x), session.triples_consumed)
    return _report(
        session, "dot-product", out, oracle,
        {"weights": list(weights), "bias": bias, "x": list(x)}, reveal,
    )
