"""ElGamal over a safe-prime group.

Key generation, encryption, decryption, and classic ElGamal signatures
used for certificates and deed signing. All arithmetic is plain Python
big integers; randomness comes from ``secrets`` unless a deterministic
``random.Random`` is injected for tests.

The group modulus is a safe prime p = 2q + 1 so that checking that the
generator has full order p-1 reduces to two exponentiations.
"""

from __future__ import annotations

import math
import random
import secrets
from dataclasses import dataclass

from .errors import (
    CorruptCiphertextError,
    InvalidEphemeralError,
    InvalidParameterError,
    MessageTooLargeError,
    NotInvertibleError,
)

MILLER_RABIN_ROUNDS = 40
DEFAULT_KEY_BITS = 1024


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(3, limit) if sieve[i]]


_SMALL_PRIMES = _small_primes(8000)


@dataclass(frozen=True)
class DomainParams:
    """Public group parameters: safe prime p and generator alpha of order p-1."""

    p: int
    alpha: int

    @property
    def q(self) -> int:
        return (self.p - 1) // 2

    @property
    def bit_length(self) -> int:
        return self.p.bit_length()

    @property
    def key_bytes(self) -> int:
        return (self.bit_length + 7) // 8


@dataclass(frozen=True)
class KeyPair:
    params: DomainParams
    private_a: int
    public_beta: int


@dataclass(frozen=True)
class Ciphertext:
    y1: int
    y2: int


@dataclass(frozen=True)
class Signature:
    r: int
    s: int


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """Square-and-multiply modular exponentiation."""
    if modulus <= 1:
        raise InvalidParameterError("modulus must be > 1")
    if exponent < 0:
        raise InvalidParameterError("exponent must be non-negative")
    return pow(base, exponent, modulus)


def mod_inv(value: int, modulus: int) -> int:
    """Modular inverse via the extended Euclidean algorithm."""
    if modulus <= 1:
        raise InvalidParameterError("modulus must be > 1")
    r0, r1 = modulus, value % modulus
    x0, x1 = 0, 1
    while r1:
        quot = r0 // r1
        r0, r1 = r1, r0 - quot * r1
        x0, x1 = x1, x0 - quot * x1
    if r0 != 1:
        raise NotInvertibleError(
            f"{value} has no inverse modulo {modulus}", value=value, modulus=modulus
        )
    return x0 % modulus


def is_probable_prime(n: int, rounds: int = MILLER_RABIN_ROUNDS, rand=None) -> bool:
    """Miller-Rabin primality test with ``rounds`` random bases."""
    if n < 2:
        return False
    for p in (2, *_SMALL_PRIMES):
        if n == p:
            return True
        if n % p == 0:
            return False
    rand = rand or secrets.SystemRandom()
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for _ in range(rounds):
        a = rand.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def generate_domain_params(
    bit_length: int = DEFAULT_KEY_BITS, rand: random.Random | None = None
) -> DomainParams:
    """Generate a safe prime p of exactly ``bit_length`` bits and a generator.

    Candidates for q = (p-1)/2 are sieved against small primes (checking
    both q and 2q+1 at once) before the full Miller-Rabin rounds run.
    """
    if bit_length < 16:
        raise InvalidParameterError("bit_length must be at least 16")
    rand = rand or secrets.SystemRandom()
    while True:
        # top two bits set so p = 2q+1 lands on exactly bit_length bits
        q = rand.getrandbits(bit_length - 1) | (3 << (bit_length - 3)) | 1
        p = 2 * q + 1
        if any(q % sp == 0 or p % sp == 0 for sp in _SMALL_PRIMES):
            continue
        # cheap 2-round prefilter before committing to 40 rounds on both
        if not is_probable_prime(q, 2, rand) or not is_probable_prime(p, 2, rand):
            continue
        if is_probable_prime(q, MILLER_RABIN_ROUNDS, rand) and is_probable_prime(
            p, MILLER_RABIN_ROUNDS, rand
        ):
            break
    while True:
        alpha = rand.randrange(2, p - 1)
        if pow(alpha, 2, p) != 1 and pow(alpha, q, p) != 1:
            return DomainParams(p=p, alpha=alpha)


def validate_domain_params(params: DomainParams) -> None:
    """Raise invalid-parameter unless p is a safe prime and alpha has order p-1."""
    p, q = params.p, params.q
    if p != 2 * q + 1 or not is_probable_prime(p) or not is_probable_prime(q):
        raise InvalidParameterError("p is not a safe prime")
    a = params.alpha % p
    if a in (0, 1) or pow(a, 2, p) == 1 or pow(a, q, p) == 1:
        raise InvalidParameterError("alpha does not generate the full group")


def keygen(params: DomainParams, rand: random.Random | None = None) -> KeyPair:
    rand = rand or secrets.SystemRandom()
    a = rand.randrange(2, params.p - 2)
    return KeyPair(params=params, private_a=a, public_beta=pow(params.alpha, a, params.p))


def encrypt(
    params: DomainParams, beta: int, x: int, k_override: int | None = None,
    rand: random.Random | None = None,
) -> Ciphertext:
    """Encrypt integer x: y1 = alpha^k, y2 = x * beta^k (mod p).

    ``k_override`` exists only so tests can pin the ephemeral; callers in
    the service never pass it.
    """
    p = params.p
    if not 1 < x < p - 1:
        raise MessageTooLargeError(f"plaintext must satisfy 1 < x < p-1, got {x}")
    if k_override is not None:
        if not 1 < k_override < p - 2:
            raise InvalidEphemeralError("k must satisfy 1 < k < p-2")
        k = k_override
    else:
        rand = rand or secrets.SystemRandom()
        k = rand.randrange(2, p - 2)
    return Ciphertext(y1=pow(params.alpha, k, p), y2=x * pow(beta, k, p) % p)


def decrypt(params: DomainParams, private_a: int, c: Ciphertext) -> int:
    p = params.p
    if not (1 <= c.y1 <= p - 1 and 1 <= c.y2 <= p - 1):
        raise CorruptCiphertextError("ciphertext components out of range")
    try:
        inv = mod_inv(pow(c.y1, private_a, p), p)
    except NotInvertibleError as exc:
        raise CorruptCiphertextError("y1^a is not invertible") from exc
    return c.y2 * inv % p


def digest_to_int(digest: bytes, params: DomainParams) -> int:
    return int.from_bytes(digest, "big") % (params.p - 1)


def sign(
    params: DomainParams, private_a: int, digest: bytes,
    rand: random.Random | None = None,
) -> Signature:
    """Classic ElGamal signature over a 32-byte digest."""
    if len(digest) != 32:
        raise InvalidParameterError("digest must be exactly 32 bytes")
    p = params.p
    h = digest_to_int(digest, params)
    rand = rand or secrets.SystemRandom()
    while True:
        k = rand.randrange(2, p - 1)
        if math.gcd(k, p - 1) != 1:
            continue
        r = pow(params.alpha, k, p)
        s = mod_inv(k, p - 1) * (h - private_a * r) % (p - 1)
        if s != 0:
            return Signature(r=r, s=s)


def verify(params: DomainParams, beta: int, digest: bytes, sig: Signature) -> bool:
    """True iff the signature checks out; never raises on malformed values."""
    try:
        p = params.p
        r, s = int(sig.r), int(sig.s)
        if not (0 < r < p and 0 <= s < p - 1) or len(digest) != 32:
            return False
        h = digest_to_int(digest, params)
        return pow(params.alpha, h, p) == pow(beta, r, p) * pow(r, s, p) % p
    except (TypeError, ValueError, AttributeError):
        return False


def int_to_fixed_bytes(value: int, width: int) -> bytes:
    return value.to_bytes(width, "big")


def fixed_bytes_to_int(data: bytes) -> int:
    return int.from_bytes(data, "big")
