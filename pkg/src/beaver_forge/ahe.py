"""Additive-only homomorphic encryption over R_q.

    KeyGen: a <- R_q uniform, s, e <- chi;  pk = ([-a*s + t*e]_q, a), sk = s
    Enc:    u, e0, e1 <- chi;  ct = ([p0*u + t*e0 + m]_q, [p1*u + t*e1]_q)
    Dec:    m = [[c0 + c1*s]_q]_t

    c0 + c1*s = m + t*(e*u + e0 + e1*s)  (mod q)

so decryption is exact while that right-hand side stays inside (-q/2, q/2].
Messages are scalars embedded in the constant coefficient; higher message
coefficients are zero.  Evaluation supports ciphertext addition and
multiplication by a plaintext scalar, never ciphertext products.

Keys and ciphertexts are immutable.  ``keygen`` and ``encrypt`` draw from a
caller-owned generator; everything else is pure.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from beaver_forge.errors import ParamsMismatchError, PlaintextRangeError
from beaver_forge.models.params import AheParams
from beaver_forge.ring import (
    RingElement,
    center_mod,
    sample_gaussian,
    sample_uniform,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PublicKey:
    """pk = (p0, p1) = ([-a*s + t*e]_q, a)."""

    params: AheParams
    p0: RingElement
    p1: RingElement


@dataclass(frozen=True)
class SecretKey:
    """sk = s, drawn from chi."""

    params: AheParams
    s: RingElement


@dataclass(frozen=True)
class Ciphertext:
    """(c0, c1) plus an advisory count of homomorphic operations applied."""

    params: AheParams
    c0: RingElement
    c1: RingElement
    level: int = 0


@dataclass(frozen=True)
class Decryption:
    """White-box decryption result.

    ``stray_coefficients`` counts higher-degree coefficients of
    [[c0 + c1*s]_q]_t that are nonzero, i.e. violations of the
    constant-coefficient encoding.
    """

    value: int
    stray_coefficients: int

    @property
    def clean(self) -> bool:
        """True when only the constant coefficient carries a value."""
        return self.stray_coefficients == 0


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def check_plaintext(m: int, params: AheParams) -> int:
    """Validate that ``m`` lies in centered Z_t and return it as int."""
    lo, hi = params.plaintext_range
    m = int(m)
    if not lo <= m <= hi:
        raise PlaintextRangeError(f"plaintext {m} outside centered Z_t [{lo}, {hi}] (t={params.t})")
    return m


def _same_params(*items: Ciphertext | PublicKey | SecretKey) -> AheParams:
    params = items[0].params
    for item in items[1:]:
        if item.params != params:
            raise ParamsMismatchError("operands were created under different AHE parameters")
    return params


# ---------------------------------------------------------------------------
# KeyGen / Enc / Dec
# ---------------------------------------------------------------------------

def keygen(params: AheParams, rng: np.random.Generator) -> tuple[PublicKey, SecretKey]:
    """Generate (pk, sk).

    Draw order is a, then s, then e; white-box tests replay it with an
    identically seeded generator.
    """
    ring = params.ring
    a = sample_uniform(ring, rng)
    s = sample_gaussian(ring, rng)
    e = sample_gaussian(ring, rng)
    p0 = -(a * s) + e.scale(params.t)
    logger.debug("keygen: n=%d q=%d t=%d", ring.n, ring.q, params.t)
    return PublicKey(params, p0, a), SecretKey(params, s)


def encrypt(pk: PublicKey, m: int, rng: np.random.Generator) -> Ciphertext:
    """Encrypt scalar ``m`` (centered Z_t) under ``pk``.  Draw order: u, e0, e1.

    Raises ``PlaintextRangeError`` when ``m`` is outside the centered range.
    """
    params = pk.params
    m = check_plaintext(m, params)
    ring = params.ring
    u = sample_gaussian(ring, rng)
    e0 = sample_gaussian(ring, rng)
    e1 = sample_gaussian(ring, rng)
    t = params.t
    c0 = pk.p0 * u + e0.scale(t) + RingElement.constant(ring, m)
    c1 = pk.p1 * u + e1.scale(t)
    return Ciphertext(params, c0, c1)


def encrypt_zero(pk: PublicKey, rng: np.random.Generator) -> Ciphertext:
    """Fresh encryption of 0, used as a re-randomizer."""
    return encrypt(pk, 0, rng)


def _raw_phase(sk: SecretKey, ct: Ciphertext) -> RingElement:
    """[c0 + c1*s]_q."""
    return ct.c0 + ct.c1 * sk.s


def decrypt_diagnostic(sk: SecretKey, ct: Ciphertext) -> Decryption:
    """Decrypt and report encoding violations in the higher coefficients."""
    params = _same_params(sk, ct)
    t = params.t
    reduced = [center_mod(c, t) for c in _raw_phase(sk, ct).to_list()]
    stray = sum(1 for c in reduced[1:] if c != 0)
    if stray:
        logger.warning("decrypt: %d nonzero higher coefficients after [.]_t", stray)
    return Decryption(value=reduced[0], stray_coefficients=stray)


def decrypt(sk: SecretKey, ct: Ciphertext) -> int:
    """Constant coefficient of [[c0 + c1*s]_q]_t.

    Noise overflow is not detectable here; it silently corrupts the result.
    Use :func:`noise_budget` in diagnostic contexts.
    """
    params = _same_params(sk, ct)
    return center_mod(int(_raw_phase(sk, ct).coeffs[0]), params.t)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def add_ct(ct1: Ciphertext, ct2: Ciphertext) -> Ciphertext:
    """Dec(result) = [m1 + m2]_t while the noise budget stays positive.

    Both operands must share one parameter set (``ParamsMismatchError``
    otherwise).  The result level is one past the deeper operand.
    """
    params = _same_params(ct1, ct2)
    return Ciphertext(params, ct1.c0 + ct2.c0, ct1.c1 + ct2.c1, max(ct1.level, ct2.level) + 1)


def sub_ct(ct1: Ciphertext, ct2: Ciphertext) -> Ciphertext:
    """Dec(result) = [m1 - m2]_t."""
    params = _same_params(ct1, ct2)
    return Ciphertext(params, ct1.c0 - ct2.c0, ct1.c1 - ct2.c1, max(ct1.level, ct2.level) + 1)


def scalar_mul_plain(k: int, ct: Ciphertext) -> Ciphertext:
    """Dec(result) = [k*m]_t; noise grows by a factor of at most |k|.

    ``k`` must already be reduced into centered Z_t.
    """
    params = ct.params
    k = int(k)
    if abs(k) > params.half_t:
        raise PlaintextRangeError(f"scalar {k} exceeds t/2={params.half_t}; reduce it mod t first")
    return Ciphertext(params, ct.c0.scale(k), ct.c1.scale(k), ct.level + 1)


def add_plain(ct: Ciphertext, m: int) -> Ciphertext:
    """Add a public plaintext without fresh randomness (no extra noise).

    ``m`` is range-checked like an encryption input.
    """
    params = ct.params
    m = check_plaintext(m, params)
    return Ciphertext(params, ct.c0 + RingElement.constant(params.ring, m), ct.c1, ct.level + 1)


# ---------------------------------------------------------------------------
# Noise diagnostics (secret-key path)
# ---------------------------------------------------------------------------

def noise_vector(sk: SecretKey, ct: Ciphertext, claimed_m: int | None = None) -> list[int]:
    """v = [c0 + c1*s]_q - m_poly, centered mod q.

    ``claimed_m`` defaults to the decrypted value.
    """
    params = _same_params(sk, ct)
    m = decrypt(sk, ct) if claimed_m is None else check_plaintext(claimed_m, params)
    v = _raw_phase(sk, ct).to_list()
    v[0] -= m
    return [center_mod(c, params.ring.q) for c in v]


def noise_budget(sk: SecretKey, ct: Ciphertext, claimed_m: int | None = None) -> int:
    """Remaining headroom in bits: floor(log2(q/2)) - ceil(log2(max(1, |v|))).

    Negative means decryption is unreliable.  With a claimed message, a
    residue that is not a multiple of t in any coefficient shows that the
    noise has already wrapped past q/2; the budget is then at most -1.
    """
    params = _same_params(sk, ct)
    q, t = params.ring.q, params.t
    v = noise_vector(sk, ct, claimed_m)
    norm = max(1, max(abs(c) for c in v))
    # floor(log2(q/2)) for odd q is bitlen(q) - 2; ceil(log2(x)) is bitlen(x - 1).
    budget = (q.bit_length() - 2) - (norm - 1).bit_length()
    if claimed_m is not None and any(c % t for c in v):
        budget = min(budget, -1)
    return budget
