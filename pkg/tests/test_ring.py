"""Ring arithmetic tests: reduction, negacyclic product, samplers.

Covers:
    center_mod / reduce_centered - centered representatives and parameter checks
    RingParams                    - validation of n, q, sigma, tail_bound
    add / sub / neg / scale       - coefficient-wise arithmetic
    negacyclic_mul                - x^n = -1 wraparound, agreement with a
                                    big-integer oracle, both code paths
    sample_uniform / sample_gaussian - range, determinism, distribution
"""

import hashlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beaver_forge.constants import DEFAULT_Q
from beaver_forge.errors import ParameterError, ParamsMismatchError
from beaver_forge.models.params import RingParams
from beaver_forge.ring import (
    RingElement,
    _schoolbook,
    center_mod,
    inf_norm,
    negacyclic_mul,
    reduce_centered,
    sample_gaussian,
    sample_uniform,
    scalar_mul,
)
from beaver_forge.seeding import derive_rng, domain_key
from helpers.oracles import negacyclic_oracle, passes_uniformity

DEFAULT = RingParams()
TINY = RingParams(n=4, q=17)


def _elem(params, values):
    """Shorthand for RingElement.from_coeffs."""
    return RingElement.from_coeffs(params, values)


def _coeffs(params):
    h = params.q // 2
    return st.lists(st.integers(-h, h), min_size=params.n, max_size=params.n)


# =====================================================================
# Reduction
# =====================================================================


class TestReduceCentered:
    """[a]_q lands in (-q/2, q/2] and rejects bad moduli."""

    def test_examples(self):
        """Small and full-scale known answers."""
        assert reduce_centered(8, 5) == -2
        assert reduce_centered(2, 5) == 2
        assert reduce_centered(DEFAULT_Q, DEFAULT_Q) == 0

    @pytest.mark.parametrize("q", [2, 1, 0, 4, 100])
    def test_rejects_even_or_small_modulus(self, q):
        """q <= 2 or even q is a parameter error."""
        with pytest.raises(ParameterError):
            reduce_centered(3, q)

    @given(st.integers(-(10**30), 10**30), st.sampled_from([3, 17, 32843, DEFAULT_Q]))
    def test_range_and_congruence(self, a, q):
        """Result is congruent to a and centered; reducing again is a no-op."""
        r = reduce_centered(a, q)
        assert -q // 2 < r <= q // 2
        assert (r - a) % q == 0
        assert reduce_centered(r, q) == r

    @given(st.integers(-(10**20), 10**20), st.integers(-(10**20), 10**20))
    def test_homomorphism(self, a, b):
        """[a + b] = [[a] + [b]] and [a * b] = [[a] * [b]]."""
        q = 32843
        assert center_mod(a + b, q) == center_mod(center_mod(a, q) + center_mod(b, q), q)
        assert center_mod(a * b, q) == center_mod(center_mod(a, q) * center_mod(b, q), q)


# =====================================================================
# Parameters
# =====================================================================


class TestRingParams:
    """RingParams validation."""

    def test_default_set(self):
        """Defaults are n=16 with the 48-bit prime modulus."""
        assert DEFAULT.n == 16
        assert DEFAULT.q == 140737488356903
        assert DEFAULT.q.bit_length() == 48
        assert DEFAULT.gaussian_cutoff == 19

    @pytest.mark.parametrize("n", [0, 1, 3, 12, 24])
    def test_rejects_non_power_of_two(self, n):
        """n must be 2^d with d >= 1."""
        with pytest.raises(ParameterError, match="power of two"):
            RingParams(n=n)

    def test_rejects_even_q(self):
        """Even moduli have no centered representative symmetry."""
        with pytest.raises(ParameterError, match="odd"):
            RingParams(q=1 << 40)

    def test_rejects_composite_q(self):
        """q must be prime."""
        with pytest.raises(ParameterError, match="prime"):
            RingParams(q=17 * 19)

    def test_rejects_wide_q(self):
        """Coefficients must fit signed 64-bit arithmetic."""
        with pytest.raises(ParameterError, match="bits"):
            RingParams(q=(1 << 127) - 1)

    @pytest.mark.parametrize("kwargs", [{"sigma": 0.0}, {"sigma": -1.0}, {"tail_bound": 0}])
    def test_rejects_bad_error_distribution(self, kwargs):
        """sigma > 0 and tail_bound >= 1."""
        with pytest.raises(ParameterError):
            RingParams(**kwargs)


# =====================================================================
# Elements and linear operations
# =====================================================================


class TestRingElement:
    """Construction, views and linear operations."""

    def test_length_enforced(self):
        """Exactly n coefficients."""
        with pytest.raises(ParameterError):
            RingElement(TINY, np.zeros(3, dtype=np.int64))

    def test_from_coeffs_reduces(self):
        """Arbitrary integers are reduced into centered form."""
        e = _elem(TINY, [17, 9, -9, 10**20])
        assert e.to_list() == [0, -8, 8, center_mod(10**20, 17)]

    def test_coefficients_read_only(self):
        """Elements are immutable."""
        e = _elem(TINY, [1, 2, 3, 4])
        with pytest.raises(ValueError):
            e.coeffs[0] = 5

    def test_add_examples(self):
        """8 + 8 = -1 mod 17; zero is the identity; a + (-a) = 0."""
        a = _elem(TINY, [8, 0, 0, 0])
        assert (a + a).to_list() == [-1, 0, 0, 0]
        b = _elem(TINY, [3, -5, 7, 1])
        assert RingElement.zero(TINY) + b == b
        assert b + (-b) == RingElement.zero(TINY)
        assert (b - b) == RingElement.zero(TINY)

    def test_mismatched_params(self):
        """Operands from different rings are rejected."""
        a = RingElement.zero(TINY)
        b = RingElement.zero(RingParams(n=4, q=19))
        with pytest.raises(ParamsMismatchError):
            a + b
        with pytest.raises(ParamsMismatchError):
            negacyclic_mul(a, b)

    def test_inf_norm(self):
        """max |a_i|, symmetric under negation."""
        assert inf_norm(RingElement.zero(TINY)) == 0
        a = _elem(TINY, [-3, 2, 0, 1])
        assert inf_norm(a) == 3
        assert inf_norm(scalar_mul(-1, a)) == inf_norm(a)

    def test_scalar_mul_examples(self, rng):
        """k*a equals repeated addition; 1 and 0 behave."""
        a = sample_uniform(DEFAULT, rng)
        assert scalar_mul(1, a) == a
        assert scalar_mul(0, a) == RingElement.zero(DEFAULT)
        acc = a
        for k in range(2, 51):
            acc = acc + a
            assert scalar_mul(k, a) == acc

    def test_json_text_form(self, rng):
        """to_json / from_json round-trip a JSON integer array."""
        a = sample_uniform(DEFAULT, rng)
        assert RingElement.from_json(DEFAULT, a.to_json()) == a
        with pytest.raises(ParameterError):
            RingElement.from_json(DEFAULT, "[1, 2]")


# =====================================================================
# Negacyclic multiplication
# =====================================================================


class TestNegacyclicMul:
    """a * b mod (x^n + 1, q)."""

    def test_wraparound(self):
        """x * x^3 = x^4 = -1 when n = 4."""
        x = _elem(TINY, [0, 1, 0, 0])
        x3 = _elem(TINY, [0, 0, 0, 1])
        assert (x * x3).to_list() == [-1, 0, 0, 0]

    def test_square_without_wraparound(self):
        """(1 + x)^2 = 1 + 2x + x^2."""
        a = _elem(TINY, [1, 1, 0, 0])
        assert (a * a).to_list() == [1, 2, 1, 0]

    def test_matches_big_integer_oracle(self):
        """Random full-scale pairs agree with arbitrary-precision schoolbook."""
        rng = derive_rng(7, "ring-oracle")
        for _ in range(200):
            a, b = sample_uniform(DEFAULT, rng), sample_uniform(DEFAULT, rng)
            assert (a * b).to_list() == negacyclic_oracle(a.to_list(), b.to_list(), DEFAULT.q)

    def test_fast_path_matches_schoolbook(self):
        """Small-norm operands take the int64 path; both paths agree."""
        rng = derive_rng(7, "ring-paths")
        for _ in range(50):
            a, s = sample_uniform(DEFAULT, rng), sample_gaussian(DEFAULT, rng)
            fast = negacyclic_mul(a, s)
            slow = _schoolbook(a.to_list(), s.to_list(), DEFAULT.q)
            assert fast.to_list() == slow.tolist()

    def test_expansion_bound(self):
        """Before wraparound |a*b| <= n * |a| * |b|."""
        rng = derive_rng(7, "ring-expansion")
        for _ in range(50):
            a, b = sample_gaussian(DEFAULT, rng), sample_gaussian(DEFAULT, rng)
            assert inf_norm(a * b) <= DEFAULT.n * inf_norm(a) * inf_norm(b)

    @settings(max_examples=200, deadline=None)
    @given(_coeffs(TINY), _coeffs(TINY), _coeffs(TINY))
    def test_ring_axioms_tiny(self, x, y, z):
        """Commutativity, associativity and distributivity at n=4, q=17."""
        a, b, c = _elem(TINY, x), _elem(TINY, y), _elem(TINY, z)
        assert a * b == b * a
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=50, deadline=None)
    @given(_coeffs(DEFAULT), _coeffs(DEFAULT), _coeffs(DEFAULT))
    def test_ring_axioms_full_width(self, x, y, z):
        """The same laws with full-width coefficients at full scale."""
        a, b, c = _elem(DEFAULT, x), _elem(DEFAULT, y), _elem(DEFAULT, z)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


# =====================================================================
# Samplers
# =====================================================================


class TestSamplers:
    """Uniform and Gaussian samplers."""

    def test_uniform_deterministic(self):
        """Same seed, same element."""
        a = sample_uniform(DEFAULT, derive_rng(1, "u"))
        b = sample_uniform(DEFAULT, derive_rng(1, "u"))
        c = sample_uniform(DEFAULT, derive_rng(2, "u"))
        assert a == b
        assert a != c

    def test_domain_tag_known_answer(self):
        """First four sha256 bytes, little-endian: sha256("abc") starts ba 78 16 bf."""
        assert domain_key("abc") == 0xBF1678BA

    def test_seeded_sample_pinned(self):
        """derive_rng is PCG64 over SeedSequence(master, spawn_key=(tag, *index))."""
        tag = int.from_bytes(hashlib.sha256(b"keygen").digest()[:4], "little")
        seq = np.random.SeedSequence(entropy=0xC0FFEE, spawn_key=(tag, 3))
        h = DEFAULT.half_q
        expected = np.random.Generator(np.random.PCG64(seq)).integers(
            -h, h, size=DEFAULT.n, endpoint=True, dtype=np.int64
        )
        elem = sample_uniform(DEFAULT, derive_rng(0xC0FFEE, "keygen", 3))
        assert elem.to_list() == expected.tolist()

    def test_uniform_range_and_distribution(self):
        """Every coefficient is centered; per-coefficient chi-square passes."""
        rng = derive_rng(3, "uniform-dist")
        draws = np.stack([sample_uniform(DEFAULT, rng).coeffs for _ in range(20_000)])
        h = DEFAULT.half_q
        assert draws.min() >= -h and draws.max() <= h
        for i in range(DEFAULT.n):
            assert passes_uniformity(draws[:, i], -h, h)

    def test_gaussian_moments_and_cutoff(self):
        """Mean near 0, variance within 10% of sigma^2, |c| <= tail*sigma."""
        rng = derive_rng(3, "gauss")
        draws = np.concatenate([sample_gaussian(DEFAULT, rng).coeffs for _ in range(10_000)]).astype(float)
        sigma = DEFAULT.sigma
        assert abs(draws.mean()) < 5 * sigma / np.sqrt(draws.size)
        assert abs(draws.var() - sigma**2) < 0.1 * sigma**2
        assert np.abs(draws).max() <= DEFAULT.tail_bound * sigma

    def test_gaussian_centered_for_tiny_modulus(self):
        """When the cutoff exceeds q/2 the output is still reduced."""
        rng = derive_rng(3, "gauss-tiny")
        for _ in range(200):
            assert inf_norm(sample_gaussian(TINY, rng)) <= TINY.half_q

    @pytest.mark.slow
    def test_uniform_distribution_full_size(self):
        """10^5 draws per coefficient."""
        rng = derive_rng(4, "uniform-dist-full")
        draws = np.stack([sample_uniform(DEFAULT, rng).coeffs for _ in range(100_000)])
        for i in range(DEFAULT.n):
            assert passes_uniformity(draws[:, i], -DEFAULT.half_q, DEFAULT.half_q)
