"""Parameter models for the ring and the additive-only encryption scheme.

Both models are frozen pydantic models: they are validated once at
construction, compared by value, and safe to share across threads.

  - RingParams: R_q = Z_q[x]/(x^n + 1) plus the error distribution chi
  - AheParams:  RingParams + plaintext modulus t, with the fresh-noise check
"""

from __future__ import annotations

import math

import sympy
from pydantic import BaseModel, ConfigDict, Field, model_validator

from beaver_forge.constants import (
    DEFAULT_N,
    DEFAULT_Q,
    DEFAULT_SIGMA,
    DEFAULT_T,
    DEFAULT_TAIL_BOUND,
    MAX_MODULUS_BITS,
)
from beaver_forge.errors import ParameterError


class RingParams(BaseModel):
    """Degree, modulus and error-distribution parameters of R_q."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(default=DEFAULT_N, description="Polynomial degree, a power of two >= 2.")
    q: int = Field(default=DEFAULT_Q, description="Odd prime ciphertext modulus.")
    sigma: float = Field(default=DEFAULT_SIGMA, description="Std-dev of the discrete Gaussian.")
    tail_bound: int = Field(default=DEFAULT_TAIL_BOUND, description="Gaussian cutoff in units of sigma.")

    @model_validator(mode="after")
    def _check(self) -> "RingParams":
        n, q = self.n, self.q
        if n < 2 or n & (n - 1):
            raise ParameterError(f"n must be a power of two >= 2, got {n}")
        if q <= 2 or q % 2 == 0:
            raise ParameterError(f"q must be odd and > 2, got {q}")
        if q.bit_length() > MAX_MODULUS_BITS:
            raise ParameterError(
                f"q has {q.bit_length()} bits; at most {MAX_MODULUS_BITS} are supported"
            )
        if not sympy.isprime(q):
            raise ParameterError(f"q must be prime, got {q}")
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        if self.tail_bound < 1:
            raise ParameterError(f"tail_bound must be >= 1, got {self.tail_bound}")
        return self

    @property
    def half_q(self) -> int:
        """Largest centered representative, (q - 1) / 2."""
        return self.q // 2

    @property
    def gaussian_cutoff(self) -> int:
        """Largest absolute value the Gaussian sampler can emit."""
        return math.floor(self.tail_bound * self.sigma)


class AheParams(BaseModel):
    """Parameters of the additive-only homomorphic encryption scheme."""

    model_config = ConfigDict(frozen=True)

    ring: RingParams = Field(default_factory=RingParams)
    t: int = Field(default=DEFAULT_T, description="Plaintext modulus.")

    @model_validator(mode="after")
    def _check(self) -> "AheParams":
        t, q = self.t, self.ring.q
        if t < 2:
            raise ParameterError(f"t must be >= 2, got {t}")
        if t >= q:
            raise ParameterError(f"t must be < q (t={t}, q={q})")
        if q <= 2 * t:
            raise ParameterError(f"q must exceed 2*t (t={t}, q={q})")
        if math.gcd(t, q) != 1:
            raise ParameterError(f"gcd(t, q) must be 1 (t={t}, q={q})")
        bound = self.fresh_noise_bound
        if bound >= q / 2:
            raise ParameterError(
                f"fresh noise bound B_fresh={bound:.6g} must be < q/2={q / 2:.6g}; "
                "raise q or lower t, sigma or tail_bound"
            )
        return self

    @property
    def half_t(self) -> int:
        """Largest centered plaintext, floor(t / 2)."""
        return self.t // 2

    @property
    def fresh_noise_bound(self) -> float:
        """Worst-case |c0 + c1*s| of a fresh ciphertext.

        t * (n*(tail*sigma)^2 + tail*sigma + n*(tail*sigma)^2) + t/2
        """
        n, t = self.ring.n, self.t
        w = self.ring.tail_bound * self.ring.sigma
        return t * (n * w * w + w + n * w * w) + t / 2

    @property
    def plaintext_range(self) -> tuple[int, int]:
        """Inclusive centered plaintext interval (-t/2, t/2]."""
        return -((self.t - 1) // 2), self.t // 2
