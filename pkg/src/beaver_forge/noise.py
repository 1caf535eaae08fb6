"""Noise-growth estimates for the shared-scalar-product reply.

``AheParams.fresh_noise_bound`` is a worst-case bound and is what parameter
validation uses.  Sizing an inner product with it is far too pessimistic,
so the protocol uses a high-probability estimate instead: the coefficients
of t*(e*u + e0 + e1*s) are sums of independent centered terms with

    std = t * sigma * sqrt(2*n*sigma^2 + 1)

and the reply  sum_i k_i*ct_i + Enc(r)  with |k_i| <= t/2 has noise std
at most sqrt(l*(t/2)^2 + 1) * std.  The estimate takes tail_bound standard
deviations of that, plus the unreduced plaintext sum_i k_i*x_i + r, which
is a multiple of t away from the decrypted value but still has to stay
below q/2.
"""

from __future__ import annotations

import functools
import logging
import math

from beaver_forge.errors import NoiseBudgetError
from beaver_forge.models.params import AheParams

logger = logging.getLogger(__name__)

# Largest inner-product length ever considered.
_MAX_SEARCH_LENGTH = 1 << 24


def fresh_noise_std(params: AheParams) -> float:
    """Per-coefficient standard deviation of t*(e*u + e0 + e1*s)."""
    n, sigma = params.ring.n, params.ring.sigma
    return params.t * sigma * math.sqrt(2 * n * sigma * sigma + 1)


def inner_product_noise_estimate(params: AheParams, length: int) -> float:
    """High-probability |c0 + c1*s| of a reply to an inner product of ``length``."""
    half_t = params.t / 2
    spread = math.sqrt(length * half_t * half_t + 1)
    noise = params.ring.tail_bound * fresh_noise_std(params) * spread
    plaintext = length * half_t * half_t + half_t
    return noise + plaintext


@functools.lru_cache(maxsize=64)
def max_inner_product_length(params: AheParams) -> int:
    """Largest l whose reply estimate stays below q/2 (0 if even l=1 fails)."""
    limit = params.ring.q / 2

    def fits(length: int) -> bool:
        return inner_product_noise_estimate(params, length) < limit

    if not fits(1):
        return 0
    lo, hi = 1, 2
    while hi <= _MAX_SEARCH_LENGTH and fits(hi):
        lo, hi = hi, hi * 2
    if hi > _MAX_SEARCH_LENGTH:
        return _MAX_SEARCH_LENGTH
    # invariant: fits(lo) and not fits(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return lo


def require_inner_product_length(params: AheParams, length: int) -> None:
    """Raise ``NoiseBudgetError`` when ``length`` exceeds the supported maximum."""
    supported = max_inner_product_length(params)
    if length > supported:
        raise NoiseBudgetError(
            f"inner product of length {length} exceeds the noise budget "
            f"(max {supported} at n={params.ring.n}, q={params.ring.q}, t={params.t}); "
            "chunk the vectors"
        )
