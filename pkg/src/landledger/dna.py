"""Bit-string <-> DNA-base transforms: 11=A, 10=T, 01=C, 00=G.

Bits travel as '0'/'1' strings, most-significant-bit first within each
byte; DNA stays plain one-letter-per-base text so stored records remain
greppable.
"""

from __future__ import annotations

from .errors import InvalidBaseError, OddLengthBitstreamError, RaggedBitstreamError

PAIR_TO_BASE = {"11": "A", "10": "T", "01": "C", "00": "G"}
BASE_TO_PAIR = {v: k for k, v in PAIR_TO_BASE.items()}


def bits_to_dna(bits: str) -> str:
    if len(bits) % 2 != 0:
        raise OddLengthBitstreamError(f"bit stream length {len(bits)} is odd")
    try:
        return "".join(PAIR_TO_BASE[bits[i : i + 2]] for i in range(0, len(bits), 2))
    except KeyError:
        bad = next(i for i, b in enumerate(bits) if b not in "01")
        raise OddLengthBitstreamError(
            f"non-bit symbol {bits[bad]!r} at position {bad}"
        ) from None


def dna_to_bits(dna: str) -> str:
    out = []
    for i, base in enumerate(dna):
        if base not in BASE_TO_PAIR:
            raise InvalidBaseError(f"invalid base {base!r} at position {i}", position=i)
        out.append(BASE_TO_PAIR[base])
    return "".join(out)


def bytes_to_bits(data: bytes) -> str:
    return "".join(f"{b:08b}" for b in data)


def bits_to_bytes(bits: str) -> bytes:
    if len(bits) % 8 != 0:
        raise RaggedBitstreamError(f"bit stream length {len(bits)} is not a multiple of 8")
    return bytes(int(bits[i : i + 8], 2) for i in range(0, len(bits), 8))
