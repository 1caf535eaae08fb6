"""Binary encodings for ring elements, keys, ciphertexts and protocol payloads.

All integers are little-endian.  Ring elements are n signed 64-bit centered
coefficients.  Keys and ciphertexts carry a 24-byte header:

    [4B magic][u32 n][u64 q][u64 t]

followed by their two (or one, for secret keys) ring elements.  Decoders
always take the expected ``AheParams`` and reject a header that does not
match, so a message built under other parameters never parses silently.

Strings are ``[u16 length][utf-8 bytes]``.
"""

from __future__ import annotations

import struct
from typing import Iterable, Sequence

import numpy as np

from beaver_forge.ahe import Ciphertext, PublicKey, SecretKey
from beaver_forge.constants import (
    CIPHERTEXT_MAGIC,
    PUBLIC_KEY_MAGIC,
    SECRET_KEY_MAGIC,
    TRIPLE_FILE_MAGIC,
)
from beaver_forge.errors import MalformedMessageError, ParamsMismatchError
from beaver_forge.models.enums import DeliveryStatus, Party
from beaver_forge.models.params import AheParams, RingParams
from beaver_forge.models.triple import TripleShare
from beaver_forge.ring import RingElement

_HEADER = struct.Struct("<4sIQQ")
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")
_I64 = struct.Struct("<q")
_U8 = struct.Struct("<B")

_PARTY_CODES = {Party.ALICE: 0, Party.BOB: 1}
_PARTY_BY_CODE = {v: k for k, v in _PARTY_CODES.items()}
_STATUS_CODES = {DeliveryStatus.DELIVERED: 0, DeliveryStatus.RETRY: 1, DeliveryStatus.REJECTED: 2}
_STATUS_BY_CODE = {v: k for k, v in _STATUS_CODES.items()}


class _Reader:
    """Cursor over a byte buffer that raises MalformedMessageError on short reads."""

    def __init__(self, data: bytes) -> None:
        self._data = memoryview(data)
        self.offset = 0

    def take(self, size: int) -> bytes:
        end = self.offset + size
        if end > len(self._data):
            raise MalformedMessageError(
                f"truncated payload: need {size} bytes at offset {self.offset}, "
                f"have {len(self._data) - self.offset}"
            )
        chunk = self._data[self.offset:end].tobytes()
        self.offset = end
        return chunk

    def unpack(self, fmt: struct.Struct) -> tuple:
        return fmt.unpack(self.take(fmt.size))

    def string(self) -> str:
        (size,) = self.unpack(_U16)
        try:
            return self.take(size).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedMessageError(f"invalid utf-8 string: {exc}") from exc

    def finish(self) -> None:
        if self.offset != len(self._data):
            raise MalformedMessageError(
                f"{len(self._data) - self.offset} trailing bytes after payload"
            )


def _string(value: str) -> bytes:
    raw = value.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise MalformedMessageError("string longer than 65535 bytes")
    return _U16.pack(len(raw)) + raw


# ---------------------------------------------------------------------------
# Ring elements
# ---------------------------------------------------------------------------

def encode_ring(elem: RingElement) -> bytes:
    """n little-endian int64 centered coefficients."""
    return elem.coeffs.astype("<i8").tobytes()


def _read_ring(reader: _Reader, params: RingParams) -> RingElement:
    raw = reader.take(8 * params.n)
    coeffs = np.frombuffer(raw, dtype="<i8").astype(np.int64)
    h = params.half_q
    if np.any(coeffs > h) or np.any(coeffs < -h):
        raise MalformedMessageError("coefficient outside the centered range of Z_q")
    return RingElement(params, coeffs)


def decode_ring(data: bytes, params: RingParams) -> RingElement:
    """Parse exactly one ring element; out-of-range coefficients are rejected."""
    reader = _Reader(data)
    elem = _read_ring(reader, params)
    reader.finish()
    return elem


# ---------------------------------------------------------------------------
# Keys and ciphertexts
# ---------------------------------------------------------------------------

def _header(magic: bytes, params: AheParams) -> bytes:
    return _HEADER.pack(magic, params.ring.n, params.ring.q, params.t)


def _read_header(reader: _Reader, magic: bytes, params: AheParams) -> None:
    got_magic, n, q, t = reader.unpack(_HEADER)
    if got_magic != magic:
        raise MalformedMessageError(f"bad magic {got_magic!r}, expected {magic!r}")
    if (n, q, t) != (params.ring.n, params.ring.q, params.t):
        raise ParamsMismatchError(
            f"payload built for (n={n}, q={q}, t={t}), expected "
            f"(n={params.ring.n}, q={params.ring.q}, t={params.t})"
        )


def encode_ciphertext(ct: Ciphertext) -> bytes:
    """AHE1 header, then c0 and c1."""
    return _header(CIPHERTEXT_MAGIC, ct.params) + encode_ring(ct.c0) + encode_ring(ct.c1)


def _read_ciphertext(reader: _Reader, params: AheParams) -> Ciphertext:
    _read_header(reader, CIPHERTEXT_MAGIC, params)
    c0 = _read_ring(reader, params.ring)
    c1 = _read_ring(reader, params.ring)
    return Ciphertext(params, c0, c1)


def decode_ciphertext(data: bytes, params: AheParams) -> Ciphertext:
    """Parse one ciphertext built under ``params``.

    Raises ``ParamsMismatchError`` when the header names other parameters and
    ``MalformedMessageError`` for a bad magic, short input or trailing bytes.
    """
    reader = _Reader(data)
    ct = _read_ciphertext(reader, params)
    reader.finish()
    return ct


def encode_ciphertexts(cts: Sequence[Ciphertext]) -> bytes:
    """Vector of ciphertexts: [u32 count] then each ciphertext."""
    return _U32.pack(len(cts)) + b"".join(encode_ciphertext(ct) for ct in cts)


def decode_ciphertexts(data: bytes, params: AheParams) -> list[Ciphertext]:
    """Inverse of :func:`encode_ciphertexts`."""
    reader = _Reader(data)
    (count,) = reader.unpack(_U32)
    cts = [_read_ciphertext(reader, params) for _ in range(count)]
    reader.finish()
    return cts


def encode_public_key(pk: PublicKey) -> bytes:
    """APK1 header, then p0 and p1."""
    return _header(PUBLIC_KEY_MAGIC, pk.params) + encode_ring(pk.p0) + encode_ring(pk.p1)


def decode_public_key(data: bytes, params: AheParams) -> PublicKey:
    """Parse a public key; a secret-key or ciphertext magic is rejected."""
    reader = _Reader(data)
    _read_header(reader, PUBLIC_KEY_MAGIC, params)
    p0 = _read_ring(reader, params.ring)
    p1 = _read_ring(reader, params.ring)
    reader.finish()
    return PublicKey(params, p0, p1)


def encode_secret_key(sk: SecretKey) -> bytes:
    """ASK1 header, then s."""
    return _header(SECRET_KEY_MAGIC, sk.params) + encode_ring(sk.s)


def decode_secret_key(data: bytes, params: AheParams) -> SecretKey:
    reader = _Reader(data)
    _read_header(reader, SECRET_KEY_MAGIC, params)
    s = _read_ring(reader, params.ring)
    reader.finish()
    return SecretKey(params, s)


# ---------------------------------------------------------------------------
# Protocol payloads
# ---------------------------------------------------------------------------

def encode_value_share(value_id: str, value: int) -> bytes:
    """One additive share (SHARE) or one opening contribution (OPENING)."""
    return _string(value_id) + _I64.pack(value)


def decode_value_share(data: bytes) -> tuple[str, int]:
    """Return ``(value_id, value)``."""
    reader = _Reader(data)
    value_id = reader.string()
    (value,) = reader.unpack(_I64)
    reader.finish()
    return value_id, value


def encode_sealed_subshare(
    triple_id: str, origin: Party, sealed: Sequence[Ciphertext]
) -> bytes:
    """Dispense payload: triple id, origin party, then (a_j, b_j, c_j) ciphertexts."""
    if len(sealed) != 3:
        raise MalformedMessageError(f"a sub-share triple has 3 components, got {len(sealed)}")
    return _string(triple_id) + _U8.pack(_PARTY_CODES[origin]) + encode_ciphertexts(sealed)


def decode_sealed_subshare(
    data: bytes, params: AheParams
) -> tuple[str, Party, list[Ciphertext]]:
    """Return ``(triple_id, origin, [a_j, b_j, c_j] ciphertexts)``; exactly three are required."""
    reader = _Reader(data)
    triple_id = reader.string()
    (code,) = reader.unpack(_U8)
    if code not in _PARTY_BY_CODE:
        raise MalformedMessageError(f"unknown party code {code}")
    (count,) = reader.unpack(_U32)
    if count != 3:
        raise MalformedMessageError(f"a sub-share triple has 3 components, got {count}")
    sealed = [_read_ciphertext(reader, params) for _ in range(count)]
    reader.finish()
    return triple_id, _PARTY_BY_CODE[code], sealed


def encode_receipt(triple_id: str, server_id: str, status: DeliveryStatus) -> bytes:
    """Receipt payload: triple id, server id, one status byte."""
    return _string(triple_id) + _string(server_id) + _U8.pack(_STATUS_CODES[status])


def decode_receipt(data: bytes) -> tuple[str, str, DeliveryStatus]:
    reader = _Reader(data)
    triple_id = reader.string()
    server_id = reader.string()
    (code,) = reader.unpack(_U8)
    reader.finish()
    if code not in _STATUS_BY_CODE:
        raise MalformedMessageError(f"unknown receipt status {code}")
    return triple_id, server_id, _STATUS_BY_CODE[code]


# ---------------------------------------------------------------------------
# Bulk triple files
# ---------------------------------------------------------------------------

def encode_triple_file(t: int, shares: Iterable[TripleShare]) -> bytes:
    """BTR1: [magic][u64 t][u32 count] then per record
    [u16 id len][id][u8 party][i64 a][i64 b][i64 c]."""
    body = []
    count = 0
    for share in shares:
        if share.t != t:
            raise MalformedMessageError(f"share {share.triple_id} has t={share.t}, file has t={t}")
        body.append(
            _string(share.triple_id)
            + _U8.pack(_PARTY_CODES[Party(share.party)])
            + struct.pack("<qqq", share.a_share, share.b_share, share.c_share)
        )
        count += 1
    return TRIPLE_FILE_MAGIC + struct.pack("<QI", t, count) + b"".join(body)


def decode_triple_file(data: bytes) -> list[TripleShare]:
    """Parse a BTR1 file back into shares; every record carries the file-level t."""
    reader = _Reader(data)
    if reader.take(4) != TRIPLE_FILE_MAGIC:
        raise MalformedMessageError("not a BTR1 triple file")
    t, count = reader.unpack(struct.Struct("<QI"))
    shares = []
    for _ in range(count):
        triple_id = reader.string()
        (code,) = reader.unpack(_U8)
        if code not in _PARTY_BY_CODE:
            raise MalformedMessageError(f"unknown party code {code}")
        a, b, c = reader.unpack(struct.Struct("<qqq"))
        shares.append(
            TripleShare(
                triple_id=triple_id, party=_PARTY_BY_CODE[code].value,
                a_share=a, b_share=b, c_share=c, t=t,
            )
        )
    reader.finish()
    return shares
