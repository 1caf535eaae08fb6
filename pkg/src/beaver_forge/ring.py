"""Exact arithmetic in R_q = Z_q[x]/(x^n + 1) with centered coefficients.

Coefficients are kept as their centered representatives in (-q/2, q/2]
inside read-only ``int64`` numpy arrays.  Multiplication takes an int64
convolution when the worst-case accumulator n*|a|*|b| fits in 63 bits and
falls back to exact Python-integer schoolbook accumulation otherwise, so
results never depend on which path ran.

All randomness comes from a caller-owned ``numpy.random.Generator``.
"""

from __future__ import annotations

import functools
import json
import math
from typing import Iterable, Sequence

import numpy as np

from beaver_forge.errors import ParameterError, ParamsMismatchError
from beaver_forge.models.params import RingParams

# Exclusive bound for values an int64 accumulator can hold.
_INT64_LIMIT = 1 << 63


# ---------------------------------------------------------------------------
# Scalar reduction
# ---------------------------------------------------------------------------

def center_mod(a: int, m: int) -> int:
    """Return the representative of ``a`` mod ``m`` in (-m/2, m/2]."""
    r = a % m
    return r - m if r > m // 2 else r


def reduce_centered(a: int, q: int) -> int:
    """[a]_q for an odd modulus q > 2."""
    if q <= 2 or q % 2 == 0:
        raise ParameterError(f"reduce_centered needs an odd modulus > 2, got {q}")
    return center_mod(a, q)


def _center_array(values: np.ndarray, m: int) -> np.ndarray:
    r = np.mod(values, m)
    r[r > m // 2] -= m
    return r


# ---------------------------------------------------------------------------
# RingElement
# ---------------------------------------------------------------------------

class RingElement:
    """Immutable element of R_q.

    Build instances with :meth:`from_coeffs`, :meth:`zero` or
    :meth:`constant`; the bare constructor trusts that ``coeffs`` is an
    already-reduced int64 array of length n.
    """

    __slots__ = ("params", "_coeffs")

    def __init__(self, params: RingParams, coeffs: np.ndarray) -> None:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (params.n,):
            raise ParameterError(f"expected {params.n} coefficients, got shape {coeffs.shape}")
        coeffs.flags.writeable = False
        self.params = params
        self._coeffs = coeffs

    # --- constructors ---

    @classmethod
    def from_coeffs(cls, params: RingParams, values: Iterable[int]) -> "RingElement":
        """Reduce arbitrary integers into centered form (exact for any size)."""
        reduced = [center_mod(int(v), params.q) for v in values]
        return cls(params, np.array(reduced, dtype=np.int64))

    @classmethod
    def zero(cls, params: RingParams) -> "RingElement":
        return cls(params, np.zeros(params.n, dtype=np.int64))

    @classmethod
    def constant(cls, params: RingParams, value: int) -> "RingElement":
        """The constant polynomial ``value`` (reduced mod q)."""
        coeffs = np.zeros(params.n, dtype=np.int64)
        coeffs[0] = center_mod(value, params.q)
        return cls(params, coeffs)

    # --- views ---

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only int64 coefficient array, lowest degree first."""
        return self._coeffs

    def to_list(self) -> list[int]:
        return [int(c) for c in self._coeffs]

    def inf_norm(self) -> int:
        return int(np.max(np.abs(self._coeffs))) if self.params.n else 0

    def to_json(self) -> str:
        """Debug text form: a JSON array of the centered coefficients."""
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, params: RingParams, text: str) -> "RingElement":
        values = json.loads(text)
        if not isinstance(values, list) or len(values) != params.n:
            raise ParameterError(f"expected a JSON array of {params.n} integers")
        return cls.from_coeffs(params, values)

    # --- arithmetic ---

    def __add__(self, other: "RingElement") -> "RingElement":
        return add(self, other)

    def __sub__(self, other: "RingElement") -> "RingElement":
        _check_same(self, other)
        return RingElement(self.params, _center_array(self._coeffs - other._coeffs, self.params.q))

    def __neg__(self) -> "RingElement":
        # Negation keeps (-q/2, q/2] only for odd q, which RingParams enforces.
        return RingElement(self.params, -self._coeffs)

    def __mul__(self, other: "RingElement") -> "RingElement":
        return negacyclic_mul(self, other)

    def scale(self, k: int) -> "RingElement":
        return scalar_mul(k, self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.params == other.params and bool(np.array_equal(self._coeffs, other._coeffs))

    def __hash__(self) -> int:
        return hash((self.params.n, self.params.q, self._coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"RingElement(n={self.params.n}, q={self.params.q}, coeffs={self.to_list()})"


def _check_same(a: RingElement, b: RingElement) -> None:
    if a.params != b.params:
        raise ParamsMismatchError(
            f"ring parameters differ: (n={a.params.n}, q={a.params.q}) "
            f"vs (n={b.params.n}, q={b.params.q})"
        )


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def add(a: RingElement, b: RingElement) -> RingElement:
    """Coefficient-wise centered sum."""
    _check_same(a, b)
    return RingElement(a.params, _center_array(a._coeffs + b._coeffs, a.params.q))


def negacyclic_mul(a: RingElement, b: RingElement) -> RingElement:
    """a * b mod (x^n + 1, q)."""
    _check_same(a, b)
    params = a.params
    n, q = params.n, params.q
    if n * a.inf_norm() * b.inf_norm() < _INT64_LIMIT:
        full = np.convolve(a._coeffs, b._coeffs)
        folded = full[:n].copy()
        folded[: n - 1] -= full[n:]
        return RingElement(params, _center_array(folded, q))
    return RingElement(params, _schoolbook(a.to_list(), b.to_list(), q))


def _schoolbook(a: Sequence[int], b: Sequence[int], q: int) -> np.ndarray:
    n = len(a)
    acc = [0] * n
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            k = i + j
            if k < n:
                acc[k] += ai * bj
            else:
                # x^n = -1
                acc[k - n] -= ai * bj
    return np.array([center_mod(c, q) for c in acc], dtype=np.int64)


def scalar_mul(k: int, a: RingElement) -> RingElement:
    """k * a with every coefficient reduced centered mod q."""
    q = a.params.q
    k = center_mod(int(k), q)
    if abs(k) * a.inf_norm() < _INT64_LIMIT:
        return RingElement(a.params, _center_array(a._coeffs * k, q))
    return RingElement(
        a.params, np.array([center_mod(k * c, q) for c in a.to_list()], dtype=np.int64)
    )


def inf_norm(a: RingElement) -> int:
    """max_i |a_i| over the centered coefficients."""
    return a.inf_norm()


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def sample_uniform(params: RingParams, rng: np.random.Generator) -> RingElement:
    """Uniform element of R_q: independent coefficients over (-q/2, q/2]."""
    h = params.half_q
    return RingElement(params, rng.integers(-h, h, size=params.n, endpoint=True, dtype=np.int64))


@functools.lru_cache(maxsize=32)
def _gaussian_table(sigma: float, tail_bound: int) -> tuple[int, np.ndarray]:
    """Cumulative table of the discrete Gaussian on [-cutoff, cutoff]."""
    cutoff = math.floor(tail_bound * sigma)
    support = np.arange(-cutoff, cutoff + 1, dtype=np.float64)
    cdf = np.cumsum(np.exp(-(support * support) / (2.0 * sigma * sigma)))
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    cdf.flags.writeable = False
    return cutoff, cdf


def sample_gaussian(params: RingParams, rng: np.random.Generator) -> RingElement:
    """Element of chi: independent discrete Gaussians, |c| <= tail_bound * sigma."""
    cutoff, cdf = _gaussian_table(params.sigma, params.tail_bound)
    idx = np.searchsorted(cdf, rng.random(params.n), side="right")
    coeffs = idx.astype(np.int64) - cutoff
    if cutoff > params.half_q:
        coeffs = _center_array(coeffs, params.q)
    return RingElement(params, coeffs)
