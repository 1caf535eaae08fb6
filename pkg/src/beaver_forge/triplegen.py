"""Two-party Beaver triple generation from a shared scalar product.

Protocol (semi-honest, three messages counting outputs)::

    Alice (pk, sk, x_A)                        Bob (pk, x_B)
    round 1:  c_A = Enc(x_A)          ----->
    round 2:                          <-----   c_B = x_B * c_A + Enc(r_B)
                                               s_B = -r_B
    round 3:  s_A = Dec(c_B) = x_A*x_B + r_B

so s_A + s_B = x_A * x_B (mod t).  The vector form encrypts every element
of inp_A; Bob folds the products homomorphically and masks the sum once
(``MaskingMode.AGGREGATE``) or masks each product separately
(``MaskingMode.PER_ELEMENT``).

A single-element run becomes a triple: Alice holds (x_A, 0, s_A) and Bob
holds (0, x_B, s_B), i.e. a = x_A, b = x_B, c = a*b.

``ideal_ssp`` and ``ideal_btg`` are the trusted-dealer functionalities the
real protocol is tested against.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from beaver_forge.ahe import (
    Ciphertext,
    PublicKey,
    SecretKey,
    add_ct,
    decrypt,
    encrypt,
    scalar_mul_plain,
)
from beaver_forge.codec import decode_ciphertexts, encode_ciphertexts
from beaver_forge.constants import DOMAIN_TRIPLE, PayloadKind
from beaver_forge.errors import (
    MalformedMessageError,
    ParameterError,
    ParamsMismatchError,
    ProtocolStateError,
)
from beaver_forge.interfaces import TripleGenerator, TriplePair
from beaver_forge.models.enums import MaskingMode, Party, Phase
from beaver_forge.models.params import AheParams
from beaver_forge.models.triple import SspInputs, TripleShare
from beaver_forge.noise import max_inner_product_length, require_inner_product_length
from beaver_forge.ring import center_mod
from beaver_forge.seeding import derive_rng
from beaver_forge.transport import MessageBus

logger = logging.getLogger(__name__)

ALICE = Party.ALICE.value
BOB = Party.BOB.value


def _uniform(t: int, rng: np.random.Generator, size: int | None = None):
    """Uniform draw(s) from centered Z_t."""
    lo, hi = -((t - 1) // 2), t // 2
    if size is None:
        return int(rng.integers(lo, hi, endpoint=True))
    return [int(v) for v in rng.integers(lo, hi, size=size, endpoint=True)]


# ===================================================================
# Ideal functionalities
# ===================================================================

def ideal_ssp(inputs: SspInputs, rng: np.random.Generator) -> tuple[int, int]:
    """Trusted-dealer SSP: s_A uniform, s_B = [sum x_i*y_i - s_A]_t."""
    t = inputs.t
    total = sum(x * y for x, y in zip(inputs.inp_a, inputs.inp_b))
    s_a = _uniform(t, rng)
    return s_a, center_mod(total - s_a, t)


def ideal_btg(
    t: int,
    rng: np.random.Generator,
    *,
    triple_id: str = "ideal",
    parties: Sequence[str] = (ALICE, BOB),
) -> tuple[tuple[int, int, int], list[TripleShare]]:
    """Trusted-dealer triple: uniform a, b, c = [ab]_t, shared additively.

    Returns ``((a, b, c), shares)`` with one TripleShare per party.  All
    but the last party's components are uniform; the last completes each sum.
    """
    if len(parties) < 2:
        raise ProtocolStateError("ideal_btg needs at least two parties")
    a, b = _uniform(t, rng), _uniform(t, rng)
    c = center_mod(a * b, t)
    columns = []
    for value in (a, b, c):
        parts = _uniform(t, rng, size=len(parties) - 1)
        parts.append(center_mod(value - sum(parts), t))
        columns.append(parts)
    shares = [
        TripleShare(
            triple_id=triple_id, party=party,
            a_share=columns[0][i], b_share=columns[1][i], c_share=columns[2][i], t=t,
        )
        for i, party in enumerate(parties)
    ]
    return (a, b, c), shares


# ===================================================================
# Protocol state machines
# ===================================================================

@dataclass
class AliceState:
    """Alice's side: key pair, secret inputs, output share."""

    pk: PublicKey
    sk: SecretKey
    x_a: list[int] | None = None
    phase: Phase = Phase.ROUND1
    s_a: int | None = None

    @property
    def length(self) -> int:
        return len(self.x_a) if self.x_a is not None else 0


@dataclass
class BobState:
    """Bob's side: Alice's public key, secret inputs, masks, output share."""

    pk: PublicKey
    x_b: list[int]
    masking: MaskingMode = MaskingMode.AGGREGATE
    phase: Phase = Phase.ROUND2
    r_b: list[int] = field(default_factory=list)
    s_b: int | None = None


def _expect_phase(actual: Phase, expected: Phase, who: str) -> None:
    if actual != expected:
        raise ProtocolStateError(f"{who} is in phase {actual.value}, expected {expected.value}")


def _check_ciphertexts(cts: Sequence[Ciphertext], params: AheParams, what: str) -> None:
    if not cts:
        raise MalformedMessageError(f"{what}: empty ciphertext vector")
    for ct in cts:
        if not isinstance(ct, Ciphertext):
            raise MalformedMessageError(f"{what}: expected Ciphertext, got {type(ct).__name__}")
        if ct.params != params:
            raise ParamsMismatchError(f"{what}: ciphertext parameters differ from the public key")


def alice_round1(state: AliceState, rng: np.random.Generator, length: int = 1) -> list[Ciphertext]:
    """Encrypt x_A element-wise; samples x_A when the caller did not set it."""
    _expect_phase(state.phase, Phase.ROUND1, "alice")
    t = state.pk.params.t
    if state.x_a is None:
        if length < 1:
            raise ProtocolStateError(f"length must be >= 1, got {length}")
        state.x_a = _uniform(t, rng, size=length)
    c_a = [encrypt(state.pk, x, rng) for x in state.x_a]
    state.phase = Phase.ROUND3
    logger.debug("alice round1: %d ciphertexts", len(c_a))
    return c_a


def bob_round2(
    state: BobState,
    c_a: Sequence[Ciphertext],
    rng: np.random.Generator,
    *,
    masks: Sequence[int] | None = None,
) -> tuple[list[Ciphertext], int]:
    """Fold x_B into Alice's ciphertexts, mask, and emit (c_B, s_B).

    ``masks`` fixes r_B instead of sampling it (replay and known-answer runs).
    """
    _expect_phase(state.phase, Phase.ROUND2, "bob")
    params = state.pk.params
    t = params.t
    _check_ciphertexts(c_a, params, "round1 message")
    if len(c_a) != len(state.x_b):
        raise MalformedMessageError(
            f"round1 message carries {len(c_a)} ciphertexts, bob holds {len(state.x_b)} inputs"
        )

    aggregate = state.masking == MaskingMode.AGGREGATE
    mask_count = 1 if aggregate else len(c_a)
    require_inner_product_length(params, len(c_a) if aggregate else 1)
    if masks is not None:
        if len(masks) != mask_count:
            raise ProtocolStateError(f"expected {mask_count} masks, got {len(masks)}")
        r_b = [center_mod(int(r), t) for r in masks]
    else:
        r_b = _uniform(t, rng, size=mask_count)

    products = [scalar_mul_plain(k, ct) for k, ct in zip(state.x_b, c_a)]
    if aggregate:
        acc = products[0]
        for term in products[1:]:
            acc = add_ct(acc, term)
        c_b = [add_ct(acc, encrypt(state.pk, r_b[0], rng))]
    else:
        c_b = [add_ct(p, encrypt(state.pk, r, rng)) for p, r in zip(products, r_b)]

    state.r_b = r_b
    state.s_b = center_mod(-sum(r_b), t)
    state.phase = Phase.DONE
    logger.debug("bob round2: %d inputs, %d reply ciphertexts (%s)", len(c_a), len(c_b), state.masking.value)
    return c_b, state.s_b


def alice_round3(state: AliceState, c_b: Sequence[Ciphertext]) -> int:
    """Decrypt Bob's reply: s_A = [sum x_A,i * x_B,i + sum r_B]_t."""
    _expect_phase(state.phase, Phase.ROUND3, "alice")
    params = state.pk.params
    _check_ciphertexts(c_b, params, "round2 message")
    if len(c_b) not in (1, state.length):
        raise MalformedMessageError(
            f"round2 message carries {len(c_b)} ciphertexts, expected 1 or {state.length}"
        )
    state.s_a = center_mod(sum(decrypt(state.sk, ct) for ct in c_b), params.t)
    state.phase = Phase.DONE
    return state.s_a


def make_triple(alice: AliceState, bob: BobState, triple_id: str) -> TriplePair:
    """Assemble a completed single-element run into two TripleShares."""
    if alice.phase != Phase.DONE or bob.phase != Phase.DONE:
        raise ProtocolStateError(
            f"incomplete run {triple_id!r}: alice={alice.phase.value}, bob={bob.phase.value}"
        )
    if alice.length != 1 or len(bob.x_b) != 1:
        raise ProtocolStateError(f"run {triple_id!r} is a vector run, triples need length 1")
    t = alice.pk.params.t
    return (
        TripleShare(triple_id=triple_id, party=ALICE, a_share=alice.x_a[0], b_share=0, c_share=alice.s_a, t=t),
        TripleShare(triple_id=triple_id, party=BOB, a_share=0, b_share=bob.x_b[0], c_share=bob.s_b, t=t),
    )


# ===================================================================
# Drivers
# ===================================================================

def _exchange(
    alice: AliceState,
    bob: BobState,
    alice_rng: np.random.Generator,
    bob_rng: np.random.Generator,
    bus: MessageBus | None,
    length: int = 1,
) -> tuple[int, int]:
    """Run the three rounds, optionally moving the messages over ``bus``."""
    params = alice.pk.params
    c_a = alice_round1(alice, alice_rng, length)
    if bus is not None:
        bus.register_all((ALICE, BOB))
        bus.send(ALICE, BOB, PayloadKind.CIPHERTEXT, encode_ciphertexts(c_a))
        c_a = decode_ciphertexts(bus.recv(BOB, ALICE, PayloadKind.CIPHERTEXT).payload, params)
    c_b, s_b = bob_round2(bob, c_a, bob_rng)
    if bus is not None:
        bus.send(BOB, ALICE, PayloadKind.CIPHERTEXT, encode_ciphertexts(c_b))
        c_b = decode_ciphertexts(bus.recv(ALICE, BOB, PayloadKind.CIPHERTEXT).payload, params)
    s_a = alice_round3(alice, c_b)
    return s_a, s_b


def generate_triple(
    pk: PublicKey,
    sk: SecretKey,
    rng: np.random.Generator,
    triple_id: str,
    *,
    bus: MessageBus | None = None,
    masking: MaskingMode = MaskingMode.AGGREGATE,
) -> TriplePair:
    """One full protocol run producing one triple.

    Alice and Bob draw from independent children of ``rng``.  A dropped
    message surfaces as ``ChannelTimeoutError`` and no triple is produced.
    """
    alice_rng, bob_rng = rng.spawn(2)
    alice = AliceState(pk=pk, sk=sk)
    bob = BobState(pk=pk, x_b=_uniform(pk.params.t, bob_rng, size=1), masking=masking)
    _exchange(alice, bob, alice_rng, bob_rng, bus)
    return make_triple(alice, bob, triple_id)


def run_ssp(
    pk: PublicKey,
    sk: SecretKey,
    inputs: SspInputs,
    rng: np.random.Generator,
    *,
    bus: MessageBus | None = None,
    masking: MaskingMode = MaskingMode.AGGREGATE,
) -> tuple[int, int]:
    """Shared scalar product on caller inputs, chunked to the noise limit.

    Each chunk is an independent run; the outputs are summed mod t.
    """
    params = pk.params
    if inputs.t != params.t:
        raise ParamsMismatchError(f"inputs use t={inputs.t}, key uses t={params.t}")
    chunk = max_inner_product_length(params) if masking == MaskingMode.AGGREGATE else inputs.length
    require_inner_product_length(params, 1)
    s_a = s_b = 0
    starts = range(0, inputs.length, max(chunk, 1))
    for start in starts:
        xs = inputs.inp_a[start:start + chunk]
        ys = inputs.inp_b[start:start + chunk]
        alice_rng, bob_rng = rng.spawn(2)
        alice = AliceState(pk=pk, sk=sk, x_a=list(xs))
        bob = BobState(pk=pk, x_b=list(ys), masking=masking)
        part_a, part_b = _exchange(alice, bob, alice_rng, bob_rng, bus, len(xs))
        s_a += part_a
        s_b += part_b
    if len(starts) > 1:
        logger.info("ssp of length %d ran in %d chunks of <= %d", inputs.length, len(starts), chunk)
    return center_mod(s_a, params.t), center_mod(s_b, params.t)


def triple_id_for(label: str, index: int) -> str:
    return f"{label}-{index:08d}"


def _generate_range(
    pk: PublicKey,
    sk: SecretKey,
    master_seed: int,
    label: str,
    masking: MaskingMode,
    indices: range,
) -> list[TriplePair]:
    return [
        generate_triple(pk, sk, derive_rng(master_seed, DOMAIN_TRIPLE, i), triple_id_for(label, i), masking=masking)
        for i in indices
    ]


def batch_generate(
    pk: PublicKey,
    sk: SecretKey,
    count: int,
    master_seed: int,
    *,
    label: str = "bt",
    start: int = 0,
    workers: int = 1,
    masking: MaskingMode = MaskingMode.AGGREGATE,
    bus: MessageBus | None = None,
) -> Iterator[TriplePair]:
    """Yield ``count`` triples, each from its own protocol run.

    Triple ``i`` draws from ``derive_rng(master_seed, "triple", i)``, so
    the stream is identical for any ``workers``.  A bus forces one worker.
    """
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    require_inner_product_length(pk.params, 1)
    indices = range(start, start + count)

    if workers <= 1 or bus is not None or count < 2 * workers:
        for i in indices:
            rng = derive_rng(master_seed, DOMAIN_TRIPLE, i)
            yield generate_triple(pk, sk, rng, triple_id_for(label, i), bus=bus, masking=masking)
        return

    step = -(-count // (workers * 4))
    chunks = [indices[k:k + step] for k in range(0, count, step)]
    logger.info("generating %d triples on %d workers (%d chunks)", count, workers, len(chunks))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_generate_range, pk, sk, master_seed, label, masking, chunk)
            for chunk in chunks
        ]
        for future in futures:
            yield from future.result()


def triple_stream_digest(pairs: Iterable[TriplePair]) -> str:
    """SHA-256 over canonical JSON records of every share, in stream order."""
    h = hashlib.sha256()
    for pair in pairs:
        for share in pair:
            h.update(json.dumps(share.model_dump(), sort_keys=True, separators=(",", ":")).encode())
            h.update(b"\n")
    return h.hexdigest()


# ===================================================================
# TripleGenerator implementations
# ===================================================================

class IdealTripleGenerator(TripleGenerator):
    """Trusted dealer; useful as a fast oracle for the online phase."""

    def __init__(self, t: int, master_seed: int, *, label: str = "ideal") -> None:
        self._t = t
        self.master_seed = master_seed
        self.label = label

    @property
    def t(self) -> int:
        return self._t

    def generate(self, count: int, *, start: int = 0) -> Iterator[TriplePair]:
        if count < 1:
            raise ParameterError(f"count must be >= 1, got {count}")
        for i in range(start, start + count):
            _, shares = ideal_btg(
                self._t, derive_rng(self.master_seed, DOMAIN_TRIPLE, i), triple_id=triple_id_for(self.label, i)
            )
            yield shares[0], shares[1]


class ProtocolTripleGenerator(TripleGenerator):
    """Real two-party generation over the additive HE scheme."""

    def __init__(
        self,
        pk: PublicKey,
        sk: SecretKey,
        master_seed: int,
        *,
        label: str = "bt",
        workers: int = 1,
        masking: MaskingMode = MaskingMode.AGGREGATE,
        bus: MessageBus | None = None,
    ) -> None:
        self.pk = pk
        self.sk = sk
        self.master_seed = master_seed
        self.label = label
        self.workers = workers
        self.masking = masking
        self.bus = bus

    @property
    def t(self) -> int:
        return self.pk.params.t

    def generate(self, count: int, *, start: int = 0) -> Iterator[TriplePair]:
        return batch_generate(
            self.pk, self.sk, count, self.master_seed,
            label=self.label, start=start, workers=self.workers,
            masking=self.masking, bus=self.bus,
        )
