"""Shared scalar product and Beaver triple generation tests.

Covers:
    alice_round1 / bob_round2 / alice_round3 - known answers, state machine
    run_ssp        - inner products for both masking modes, chunking
    make_triple    - share layout and c = a*b
    batch_generate - validity, determinism, worker independence
    ideal_ssp / ideal_btg - dealer functionalities and share distribution
"""

import hashlib

import numpy as np
import pytest

from beaver_forge.ahe import encrypt, keygen, noise_budget
from beaver_forge.errors import (
    MalformedMessageError,
    NoiseBudgetError,
    ParameterError,
    ParamsMismatchError,
    ProtocolStateError,
)
from beaver_forge.interfaces import TripleGenerator
from beaver_forge.models.enums import MaskingMode, Phase
from beaver_forge.models.params import AheParams, RingParams
from beaver_forge.models.triple import SspInputs, TripleShare
from beaver_forge.noise import max_inner_product_length
from beaver_forge.ring import center_mod
from beaver_forge.seeding import derive_rng
from beaver_forge.transport import MessageBus
from beaver_forge.triplegen import (
    ALICE,
    BOB,
    AliceState,
    BobState,
    IdealTripleGenerator,
    ProtocolTripleGenerator,
    alice_round1,
    alice_round3,
    batch_generate,
    bob_round2,
    generate_triple,
    ideal_btg,
    ideal_ssp,
    make_triple,
    run_ssp,
    triple_id_for,
    triple_stream_digest,
)
from helpers.oracles import centered, passes_uniformity

EMPTY_SHA256 = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"

SMALL = AheParams(ring=RingParams(n=4, q=1000003), t=17)


def _random_inputs(t, length, rng):
    lo, hi = -((t - 1) // 2), t // 2
    xs = rng.integers(lo, hi, size=length, endpoint=True).tolist()
    ys = rng.integers(lo, hi, size=length, endpoint=True).tolist()
    return SspInputs(inp_a=xs, inp_b=ys, t=t)


def _valid(pair, t):
    a = sum(s.a_share for s in pair)
    b = sum(s.b_share for s in pair)
    c = sum(s.c_share for s in pair)
    return centered(c - a * b, t) == 0


# =====================================================================
# Rounds
# =====================================================================


class TestRounds:
    """The three-message exchange driven step by step."""

    def test_known_answer(self, keys, rng):
        """x_A=3, x_B=5, r_B=7: Alice decrypts 22, Bob keeps -7, sum is 15."""
        pk, sk = keys
        alice = AliceState(pk=pk, sk=sk, x_a=[3])
        bob = BobState(pk=pk, x_b=[5])
        c_a = alice_round1(alice, rng)
        assert alice.phase == Phase.ROUND3
        c_b, s_b = bob_round2(bob, c_a, rng, masks=[7])
        assert s_b == -7
        assert bob.phase == Phase.DONE
        s_a = alice_round3(alice, c_b)
        assert s_a == 22
        assert center_mod(s_a + s_b, pk.params.t) == 15

    def test_known_answer_triple(self, keys, rng):
        pk, sk = keys
        alice = AliceState(pk=pk, sk=sk, x_a=[3])
        bob = BobState(pk=pk, x_b=[5])
        c_b, _ = bob_round2(bob, alice_round1(alice, rng), rng, masks=[7])
        alice_round3(alice, c_b)
        sa, sb = make_triple(alice, bob, "kat")
        assert (sa.party, sa.a_share, sa.b_share, sa.c_share) == (ALICE, 3, 0, 22)
        assert (sb.party, sb.a_share, sb.b_share, sb.c_share) == (BOB, 0, 5, -7)

    def test_alice_samples_inputs(self, keys, rng):
        pk, sk = keys
        alice = AliceState(pk=pk, sk=sk)
        c_a = alice_round1(alice, rng, length=4)
        assert len(c_a) == 4
        assert alice.length == 4

    def test_round_order_enforced(self, keys, rng):
        pk, sk = keys
        alice = AliceState(pk=pk, sk=sk, x_a=[1])
        with pytest.raises(ProtocolStateError, match="round1"):
            alice_round3(alice, [encrypt(pk, 0, rng)])
        alice_round1(alice, rng)
        with pytest.raises(ProtocolStateError):
            alice_round1(alice, rng)

    def test_bob_runs_once(self, keys, rng):
        pk, sk = keys
        bob = BobState(pk=pk, x_b=[2])
        c_a = [encrypt(pk, 1, rng)]
        bob_round2(bob, c_a, rng)
        with pytest.raises(ProtocolStateError):
            bob_round2(bob, c_a, rng)

    def test_length_mismatch(self, keys, rng):
        pk, _ = keys
        bob = BobState(pk=pk, x_b=[1, 2])
        with pytest.raises(MalformedMessageError):
            bob_round2(bob, [encrypt(pk, 1, rng)], rng)

    def test_empty_message(self, keys, rng):
        pk, _ = keys
        with pytest.raises(MalformedMessageError):
            bob_round2(BobState(pk=pk, x_b=[1]), [], rng)

    def test_foreign_ciphertext(self, keys, rng):
        """Ciphertexts under other parameters are rejected before folding."""
        pk, _ = keys
        other_pk, _ = keygen(SMALL, rng)
        with pytest.raises(ParamsMismatchError):
            bob_round2(BobState(pk=pk, x_b=[1]), [encrypt(other_pk, 1, rng)], rng)

    def test_mask_count_checked(self, keys, rng):
        pk, _ = keys
        bob = BobState(pk=pk, x_b=[1, 2], masking=MaskingMode.PER_ELEMENT)
        with pytest.raises(ProtocolStateError, match="masks"):
            bob_round2(bob, [encrypt(pk, 1, rng), encrypt(pk, 2, rng)], rng, masks=[1])

    def test_reply_length_checked(self, keys, rng):
        pk, sk = keys
        alice = AliceState(pk=pk, sk=sk, x_a=[1, 2, 3])
        alice_round1(alice, rng)
        with pytest.raises(MalformedMessageError):
            alice_round3(alice, [encrypt(pk, 0, rng), encrypt(pk, 0, rng)])

    def test_per_element_reply(self, keys, rng):
        """One masked ciphertext per product; Alice sums the decryptions."""
        pk, sk = keys
        alice = AliceState(pk=pk, sk=sk, x_a=[1, 2, 3])
        bob = BobState(pk=pk, x_b=[4, 5, 6], masking=MaskingMode.PER_ELEMENT)
        c_b, s_b = bob_round2(bob, alice_round1(alice, rng), rng)
        assert len(c_b) == 3
        assert len(bob.r_b) == 3
        assert center_mod(alice_round3(alice, c_b) + s_b, pk.params.t) == 32

    def test_noise_limit(self, rng):
        """An aggregate reply longer than the noise budget allows is refused."""
        pk, _ = keygen(SMALL, rng)
        limit = max_inner_product_length(SMALL)
        c_a = [encrypt(pk, 1, rng)] * (limit + 1)
        bob = BobState(pk=pk, x_b=[1] * (limit + 1))
        with pytest.raises(NoiseBudgetError):
            bob_round2(bob, c_a, rng)


# =====================================================================
# Shared scalar product
# =====================================================================


class TestSsp:

    @pytest.mark.parametrize("masking", list(MaskingMode))
    def test_small_vector(self, keys, rng, masking):
        """(1,2,3).(4,5,6) = 32."""
        pk, sk = keys
        inputs = SspInputs(inp_a=[1, 2, 3], inp_b=[4, 5, 6], t=pk.params.t)
        s_a, s_b = run_ssp(pk, sk, inputs, rng, masking=masking)
        assert center_mod(s_a + s_b, pk.params.t) == 32

    @pytest.mark.parametrize("length", [1, 8, 64])
    @pytest.mark.parametrize("masking", list(MaskingMode))
    def test_random_vectors(self, keys, rng, length, masking):
        pk, sk = keys
        t = pk.params.t
        for _ in range(10):
            inputs = _random_inputs(t, length, rng)
            s_a, s_b = run_ssp(pk, sk, inputs, rng, masking=masking)
            expected = sum(x * y for x, y in zip(inputs.inp_a, inputs.inp_b))
            assert centered(s_a + s_b - expected, t) == 0

    def test_extreme_inputs(self, keys, rng):
        """Every element at +-t/2 stresses the plaintext wraparound."""
        pk, sk = keys
        t = pk.params.t
        h = t // 2
        inputs = SspInputs(inp_a=[h, -h] * 32, inp_b=[h, h] * 32, t=t)
        s_a, s_b = run_ssp(pk, sk, inputs, rng)
        assert centered(s_a + s_b, t) == centered(32 * h * h - 32 * h * h, t)

    def test_worst_case_reply_keeps_budget(self, keys, rng):
        """|x_A| = |x_B| = (t-1)/2 at length 64: the reply still has budget left."""
        pk, sk = keys
        t = pk.params.t
        h = (t - 1) // 2
        xs, ys = [h, -h] * 32, [h] * 64
        alice = AliceState(pk=pk, sk=sk, x_a=xs)
        bob = BobState(pk=pk, x_b=ys)
        c_b, s_b = bob_round2(bob, alice_round1(alice, rng), rng)
        assert min(noise_budget(sk, ct) for ct in c_b) > 0
        s_a = alice_round3(alice, c_b)
        assert centered(s_a + s_b, t) == centered(sum(x * y for x, y in zip(xs, ys)), t)

    def test_chunked(self, rng):
        """Inputs longer than the noise limit are split into several runs."""
        pk, sk = keygen(SMALL, rng)
        length = 2 * max_inner_product_length(SMALL) + 5
        inputs = _random_inputs(SMALL.t, length, rng)
        s_a, s_b = run_ssp(pk, sk, inputs, rng)
        expected = sum(x * y for x, y in zip(inputs.inp_a, inputs.inp_b))
        assert centered(s_a + s_b - expected, SMALL.t) == 0

    def test_over_bus(self, keys, rng):
        """Moving the messages over the bus does not change the result."""
        pk, sk = keys
        bus = MessageBus(seed=2)
        inputs = SspInputs(inp_a=[1, 2, 3], inp_b=[4, 5, 6], t=pk.params.t)
        s_a, s_b = run_ssp(pk, sk, inputs, rng, bus=bus)
        assert center_mod(s_a + s_b, pk.params.t) == 32
        assert len(bus.transcript.envelopes) == 2

    def test_t_mismatch(self, keys, rng):
        pk, sk = keys
        with pytest.raises(ParamsMismatchError):
            run_ssp(pk, sk, SspInputs(inp_a=[1], inp_b=[1], t=17), rng)

    def test_alice_output_uniform_for_fixed_inputs(self, keys, rng):
        """s_A alone reveals nothing about x_B: uniform over Z_t for fixed inputs."""
        pk, sk = keys
        h = pk.params.t // 2
        outputs = []
        for _ in range(1500):
            alice = AliceState(pk=pk, sk=sk, x_a=[3])
            bob = BobState(pk=pk, x_b=[5])
            c_b, _ = bob_round2(bob, alice_round1(alice, rng), rng)
            outputs.append(alice_round3(alice, c_b))
        assert passes_uniformity(outputs, -h, h)

    def test_real_matches_ideal_relation(self, keys, rng):
        """Real and dealer runs satisfy the same reconstruction relation."""
        pk, sk = keys
        t = pk.params.t
        for _ in range(30):
            inputs = _random_inputs(t, 4, rng)
            expected = sum(x * y for x, y in zip(inputs.inp_a, inputs.inp_b))
            for s_a, s_b in (run_ssp(pk, sk, inputs, rng), ideal_ssp(inputs, rng)):
                assert centered(s_a + s_b - expected, t) == 0

    def test_ideal_ssp(self, rng):
        inputs = SspInputs(inp_a=[1, 2, 3], inp_b=[4, 5, 6], t=32843)
        s_a, s_b = ideal_ssp(inputs, rng)
        assert centered(s_a + s_b, 32843) == 32


# =====================================================================
# Triples
# =====================================================================


class TestTriples:

    def test_generate_triple_valid(self, keys, rng):
        pk, sk = keys
        for i in range(50):
            pair = generate_triple(pk, sk, rng, triple_id_for("bt", i))
            assert _valid(pair, pk.params.t)
            assert pair[0].triple_id == pair[1].triple_id == f"bt-{i:08d}"

    def test_batch_deterministic(self, keys):
        pk, sk = keys
        first = list(batch_generate(pk, sk, 12, 0xABC))
        second = list(batch_generate(pk, sk, 12, 0xABC))
        assert first == second
        assert triple_stream_digest(first) == triple_stream_digest(second)
        assert all(_valid(p, pk.params.t) for p in first)

    def test_stream_digest_known_answer(self):
        """Sorted-key compact JSON per share, newline-terminated, in stream order."""
        alice = TripleShare(triple_id="bt-00000000", party="alice", a_share=1, b_share=0, c_share=1, t=3)
        bob = TripleShare(triple_id="bt-00000000", party="bob", a_share=0, b_share=-1, c_share=0, t=3)
        stream = (
            b'{"a_share":1,"b_share":0,"c_share":1,"party":"alice","t":3,"triple_id":"bt-00000000"}\n'
            b'{"a_share":0,"b_share":-1,"c_share":0,"party":"bob","t":3,"triple_id":"bt-00000000"}\n'
        )
        assert triple_stream_digest([(alice, bob)]) == hashlib.sha256(stream).hexdigest()
        assert triple_stream_digest([]) == EMPTY_SHA256

    def test_batch_start_offset(self, keys):
        """A batch starting at i continues the stream of a batch starting at 0."""
        pk, sk = keys
        whole = list(batch_generate(pk, sk, 6, 7))
        tail = list(batch_generate(pk, sk, 3, 7, start=3))
        assert tail == whole[3:]

    def test_workers_do_not_change_stream(self, keys):
        pk, sk = keys
        serial = list(batch_generate(pk, sk, 8, 5, workers=1))
        parallel = list(batch_generate(pk, sk, 8, 5, workers=2))
        assert serial == parallel

    def test_batch_rejects_zero(self, keys):
        pk, sk = keys
        with pytest.raises(ParameterError):
            next(batch_generate(pk, sk, 0, 1))

    def test_batch_over_bus(self, keys):
        pk, sk = keys
        bus = MessageBus(seed=4)
        pairs = list(batch_generate(pk, sk, 3, 4, bus=bus))
        assert pairs == list(batch_generate(pk, sk, 3, 4))
        assert len(bus.transcript.envelopes) == 6

    def test_share_distribution(self, keys):
        """Each party's c share alone is uniform over Z_t."""
        pk, sk = keys
        t = pk.params.t
        pairs = list(batch_generate(pk, sk, 1500, 0x5EED))
        h = t // 2
        assert passes_uniformity([p[0].c_share for p in pairs], -h, h)
        assert passes_uniformity([p[1].c_share for p in pairs], -h, h)

    def test_share_marginals_uniform(self, keys):
        """a comes from Alice's x_A and b from Bob's x_B; both are uniform."""
        pk, sk = keys
        h = pk.params.t // 2
        pairs = list(batch_generate(pk, sk, 1500, 0xAB))
        assert passes_uniformity([p[0].a_share for p in pairs], -h, h)
        assert passes_uniformity([p[1].b_share for p in pairs], -h, h)
        assert all(p[0].b_share == 0 and p[1].a_share == 0 for p in pairs)

    def test_unit_a_gives_c_equal_b(self, keys, rng):
        """x_A = 1 makes the reconstructed c equal to b."""
        pk, sk = keys
        t = pk.params.t
        for x_b in (0, 1, -16421, 12345):
            alice = AliceState(pk=pk, sk=sk, x_a=[1])
            bob = BobState(pk=pk, x_b=[x_b])
            c_b, _ = bob_round2(bob, alice_round1(alice, rng), rng)
            alice_round3(alice, c_b)
            sa, sb = make_triple(alice, bob, "unit")
            assert centered(sa.c_share + sb.c_share, t) == x_b

    @pytest.mark.slow
    def test_batch_large(self, keys):
        pk, sk = keys
        pairs = list(batch_generate(pk, sk, 100_000, 0xC0FFEE, workers=4))
        assert all(_valid(p, pk.params.t) for p in pairs)


class TestGenerators:

    def test_ideal_btg(self, rng):
        t = 32843
        for _ in range(200):
            (a, b, c), shares = ideal_btg(t, rng, parties=("s1", "s2", "s3"))
            assert c == centered(a * b, t)
            assert centered(sum(s.a_share for s in shares) - a, t) == 0
            assert centered(sum(s.c_share for s in shares) - c, t) == 0
            assert [s.party for s in shares] == ["s1", "s2", "s3"]

    def test_ideal_btg_needs_two(self, rng):
        with pytest.raises(ProtocolStateError):
            ideal_btg(17, rng, parties=("solo",))

    def test_ideal_generator(self):
        gen = IdealTripleGenerator(32843, 11)
        assert isinstance(gen, TripleGenerator)
        pairs = list(gen.generate(20))
        assert all(_valid(p, 32843) for p in pairs)
        assert pairs[0][0].triple_id == "ideal-00000000"

    def test_protocol_generator(self, keys):
        pk, sk = keys
        gen = ProtocolTripleGenerator(pk, sk, 3, label="run")
        assert gen.t == pk.params.t
        pairs = list(gen.generate(4, start=10))
        assert [p[0].triple_id for p in pairs] == [f"run-{i:08d}" for i in range(10, 14)]
        assert pairs == list(batch_generate(pk, sk, 4, 3, label="run", start=10))

    def test_ideal_shares_uniform(self):
        gen = IdealTripleGenerator(32843, 99)
        values = np.array([p[0].a_share for p in gen.generate(3000)])
        assert passes_uniformity(values, -16421, 16421)

    def test_ideal_btg_zero_a(self, rng):
        """Whenever the dealer draws a = 0 the product c is 0."""
        zeros = 0
        for _ in range(300):
            (a, b, c), shares = ideal_btg(3, rng)
            assert c == centered(a * b, 3)
            if a == 0:
                zeros += 1
                assert c == 0
                assert centered(sum(s.c_share for s in shares), 3) == 0
        assert zeros > 0
