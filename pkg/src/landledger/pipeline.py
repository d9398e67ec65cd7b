"""End-to-end record pipeline: text -> C2I digits -> chunked ElGamal -> envelope bytes -> bits -> DNA, and back.

A record's digit stream is split into fixed-size chunks, each prefixed
with a guard digit '1' before integer conversion so leading zeros
survive, then ElGamal-encrypted with a fresh ephemeral per chunk. The
ciphertext pairs are framed in a fixed binary envelope, expanded to bits
and transcribed to DNA bases.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

from . import c2i, dna, elgamal
from .errors import (
    EnvelopeFormatError,
    GuardDigitMissingError,
    InvalidChunkingError,
    MessageTooLargeError,
)

ENVELOPE_MAGIC = b"LRC1"
ENVELOPE_VERSION = 1
ENVELOPE_HEADER_LEN = 21
DEFAULT_CHUNK_DIGITS = 100
MAX_CHUNK_DIGITS = 300  # guarded chunk < 2*10^300 < any 1024-bit prime


@dataclass(frozen=True)
class EncryptedEnvelope:
    chunk_digits: int
    plaintext_chars: int
    key_bytes: int
    ciphertexts: tuple[elgamal.Ciphertext, ...]
    version: int = ENVELOPE_VERSION

    @property
    def chunk_count(self) -> int:
        return len(self.ciphertexts)


@dataclass(frozen=True)
class DnaCiphertext:
    """An encrypted record at rest: ACGT text bound to its owner key."""

    dna: str
    key_fingerprint: bytes

    def __post_init__(self):
        if len(self.dna) % 4 != 0:
            raise EnvelopeFormatError("DNA length must cover whole envelope bytes")


def _check_chunk_size(chunk_size: int) -> None:
    if chunk_size <= 0 or chunk_size % 2 != 0 or chunk_size > MAX_CHUNK_DIGITS:
        raise InvalidChunkingError(
            f"chunk size must be even and in [2, {MAX_CHUNK_DIGITS}], got {chunk_size}"
        )


def chunk_digit_string(digits: str, chunk_size: int) -> list[int]:
    """Split a digit stream into guarded integers (guard digit '1' first)."""
    _check_chunk_size(chunk_size)
    return [
        int("1" + digits[i : i + chunk_size]) for i in range(0, len(digits), chunk_size)
    ]


def join_chunks(values: list[int], chunk_size: int, total_digits: int) -> str:
    """Inverse of chunk_digit_string; validates every guard digit."""
    _check_chunk_size(chunk_size)
    out = []
    remaining = total_digits
    for i, value in enumerate(values):
        expected = min(chunk_size, remaining)
        text = str(value)
        if len(text) != expected + 1 or text[0] != "1":
            raise GuardDigitMissingError(
                f"chunk {i} lost its guard digit (wrong key or corrupted data)",
                chunk_index=i,
            )
        out.append(text[1:])
        remaining -= expected
    if remaining != 0:
        raise GuardDigitMissingError("chunk list does not cover the declared digit count")
    return "".join(out)


def key_fingerprint(params: elgamal.DomainParams, beta: int) -> bytes:
    """SHA-256 over the fixed-width public key serialization (p, alpha, beta)."""
    w = params.key_bytes
    body = struct.pack(">H", w) + b"".join(
        v.to_bytes(w, "big") for v in (params.p, params.alpha, beta)
    )
    return hashlib.sha256(body).digest()


def serialize_envelope(env: EncryptedEnvelope) -> bytes:
    if env.chunk_count == 0:
        raise EnvelopeFormatError("envelope must carry at least one chunk")
    head = ENVELOPE_MAGIC + struct.pack(
        ">BHIIH4x",
        env.version,
        env.chunk_digits,
        env.plaintext_chars,
        env.chunk_count,
        env.key_bytes,
    )
    body = b"".join(
        c.y1.to_bytes(env.key_bytes, "big") + c.y2.to_bytes(env.key_bytes, "big")
        for c in env.ciphertexts
    )
    return head + body


def parse_envelope(data: bytes) -> EncryptedEnvelope:
    if len(data) < ENVELOPE_HEADER_LEN:
        raise EnvelopeFormatError("envelope shorter than its header")
    if data[:4] != ENVELOPE_MAGIC:
        raise EnvelopeFormatError("bad envelope magic")
    version, chunk_digits, plaintext_chars, chunk_count, key_bytes = struct.unpack(
        ">BHIIH4x", data[4:ENVELOPE_HEADER_LEN]
    )
    if version != ENVELOPE_VERSION:
        raise EnvelopeFormatError(f"unsupported envelope version {version}")
    if chunk_count == 0 or plaintext_chars == 0:
        raise EnvelopeFormatError("empty envelope")
    expected = ENVELOPE_HEADER_LEN + chunk_count * 2 * key_bytes
    if len(data) != expected:
        raise EnvelopeFormatError(
            f"envelope length {len(data)} does not match declared {expected}"
        )
    if chunk_count != -(-2 * plaintext_chars // chunk_digits):
        raise EnvelopeFormatError("chunk count inconsistent with plaintext length")
    pairs = []
    off = ENVELOPE_HEADER_LEN
    for _ in range(chunk_count):
        y1 = int.from_bytes(data[off : off + key_bytes], "big")
        y2 = int.from_bytes(data[off + key_bytes : off + 2 * key_bytes], "big")
        pairs.append(elgamal.Ciphertext(y1=y1, y2=y2))
        off += 2 * key_bytes
    return EncryptedEnvelope(
        chunk_digits=chunk_digits,
        plaintext_chars=plaintext_chars,
        key_bytes=key_bytes,
        ciphertexts=tuple(pairs),
    )


def encrypt_record(
    params: elgamal.DomainParams,
    owner_public_beta: int,
    text: str,
    chunk_size: int = DEFAULT_CHUNK_DIGITS,
    rand=None,
) -> DnaCiphertext:
    """Run the full encryption pipeline on a plaintext record."""
    if not text:
        raise MessageTooLargeError("record must be non-empty")
    _check_chunk_size(chunk_size)
    if 2 * 10**chunk_size >= params.p - 1:
        raise InvalidChunkingError(
            f"chunk size {chunk_size} does not fit under a {params.bit_length}-bit modulus"
        )
    digits = c2i.encode_text(text)
    chunks = chunk_digit_string(digits, chunk_size)
    ciphers = tuple(
        elgamal.encrypt(params, owner_public_beta, chunk, rand=rand) for chunk in chunks
    )
    env = EncryptedEnvelope(
        chunk_digits=chunk_size,
        plaintext_chars=len(text),
        key_bytes=params.key_bytes,
        ciphertexts=ciphers,
    )
    bits = dna.bytes_to_bits(serialize_envelope(env))
    return DnaCiphertext(
        dna=dna.bits_to_dna(bits), key_fingerprint=key_fingerprint(params, owner_public_beta)
    )


def decrypt_record(
    params: elgamal.DomainParams, owner_private_a: int, ct: DnaCiphertext
) -> str:
    """Inverse pipeline; raises guard-digit-missing on a wrong key rather than returning garbage."""
    env = parse_envelope(dna.bits_to_bytes(dna.dna_to_bits(ct.dna)))
    values = [elgamal.decrypt(params, owner_private_a, c) for c in env.ciphertexts]
    digits = join_chunks(values, env.chunk_digits, 2 * env.plaintext_chars)
    text = c2i.decode_digits(digits)
    return text[: env.plaintext_chars]


def envelope_byte_length(plaintext_chars: int, chunk_size: int, key_bytes: int) -> int:
    """Closed-form serialized size: header plus chunk_count ciphertext pairs."""
    chunk_count = -(-2 * plaintext_chars // chunk_size)
    return ENVELOPE_HEADER_LEN + chunk_count * 2 * key_bytes
