"""Noise-growth estimates and the inner-product length limit.

Covers:
    fresh_noise_std / inner_product_noise_estimate: closed forms, monotonicity
    max_inner_product_length: maximality, default-set magnitude, caching
    require_inner_product_length: NoiseBudgetError above the limit
"""

import math

import pytest

from beaver_forge.errors import NoiseBudgetError, ParameterError
from beaver_forge.models.params import AheParams, RingParams
from beaver_forge.noise import (
    fresh_noise_std,
    inner_product_noise_estimate,
    max_inner_product_length,
    require_inner_product_length,
)

SMALL = AheParams(ring=RingParams(n=4, q=1000003), t=17)


class TestEstimates:

    def test_fresh_std_closed_form(self, params):
        expected = params.t * 3.2 * math.sqrt(2 * 16 * 3.2 * 3.2 + 1)
        assert fresh_noise_std(params) == pytest.approx(expected)

    def test_estimate_grows_with_length(self, params):
        values = [inner_product_noise_estimate(params, n) for n in (1, 2, 8, 64, 1024)]
        assert values == sorted(values)
        assert len(set(values)) == len(values)

    def test_estimate_below_worst_case_for_one(self, params):
        """A single scaled ciphertext is estimated well under q/2."""
        assert inner_product_noise_estimate(params, 1) < params.ring.q / 2


class TestMaxLength:

    def test_default_set_magnitude(self, params):
        """Tens of thousands of terms fit under the default parameters."""
        assert 50_000 < max_inner_product_length(params) < 100_000

    @pytest.mark.parametrize("p", [AheParams(), SMALL], ids=["default", "small"])
    def test_is_maximal(self, p):
        """The reported length fits and the next one does not."""
        limit = max_inner_product_length(p)
        half_q = p.ring.q / 2
        assert limit >= 1
        assert inner_product_noise_estimate(p, limit) < half_q
        assert inner_product_noise_estimate(p, limit + 1) >= half_q

    def test_cached(self, params):
        max_inner_product_length.cache_clear()
        max_inner_product_length(params)
        max_inner_product_length(params)
        assert max_inner_product_length.cache_info().hits >= 1


class TestRequire:

    def test_accepts_limit(self, params):
        require_inner_product_length(params, max_inner_product_length(params))

    def test_rejects_above_limit(self, params):
        limit = max_inner_product_length(params)
        with pytest.raises(NoiseBudgetError, match="chunk"):
            require_inner_product_length(params, limit + 1)

    def test_is_parameter_error(self, params):
        """Callers catching ParameterError also see noise-budget failures."""
        with pytest.raises(ParameterError):
            require_inner_product_length(params, 10**9)
