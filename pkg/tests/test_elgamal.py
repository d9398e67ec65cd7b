import hashlib
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from landledger import elgamal
from landledger.errors import (
    CorruptCiphertextError,
    InvalidEphemeralError,
    InvalidParameterError,
    MessageTooLargeError,
    NotInvertibleError,
)


def naive_mod_pow(base, exponent, modulus):
    """Independent oracle: literal repeated multiplication."""
    acc = 1 % modulus
    for _ in range(exponent):
        acc = acc * base % modulus
    return acc


class TestModArithmetic:
    def test_mod_pow_worked_example(self):
        assert elgamal.mod_pow(5, 6, 23) == naive_mod_pow(5, 6, 23) == 8

    def test_mod_pow_identity_exponent(self):
        for x in (0, 1, 7, 100, 12345):
            assert elgamal.mod_pow(x, 1, 97) == x % 97

    def test_mod_pow_agrees_with_naive_oracle(self, rng):
        for _ in range(300):
            modulus = rng.randrange(2, 1000)
            base = rng.randrange(0, 1000)
            exponent = rng.randrange(0, 200)
            assert elgamal.mod_pow(base, exponent, modulus) == naive_mod_pow(
                base, exponent, modulus
            )

    def test_mod_pow_exhaustive_small(self):
        for modulus in range(2, 30):
            for base in range(modulus):
                for exponent in range(8):
                    assert elgamal.mod_pow(base, exponent, modulus) == naive_mod_pow(
                        base, exponent, modulus
                    )

    def test_mod_pow_rejects_bad_modulus(self):
        with pytest.raises(InvalidParameterError):
            elgamal.mod_pow(2, 3, 1)

    def test_mod_inv_worked_example(self):
        assert elgamal.mod_inv(6, 23) == 4
        assert 6 * 4 % 23 == 1

    def test_mod_inv_non_coprime(self):
        with pytest.raises(NotInvertibleError):
            elgamal.mod_inv(6, 24)

    @given(st.integers(min_value=1, max_value=10**9), st.integers(min_value=2, max_value=10**9))
    def test_mod_inv_property(self, value, modulus):
        import math

        if math.gcd(value, modulus) == 1:
            assert value * elgamal.mod_inv(value, modulus) % modulus == 1
        else:
            with pytest.raises(NotInvertibleError):
                elgamal.mod_inv(value, modulus)


class TestDomainParams:
    def test_generate_16_bit(self, rng):
        params = elgamal.generate_domain_params(16, rng)
        assert params.p.bit_length() == 16
        assert elgamal.is_probable_prime(params.p)
        assert elgamal.is_probable_prime(params.q)
        assert params.p == 2 * params.q + 1

    def test_alpha_has_full_order(self, rng):
        params = elgamal.generate_domain_params(20, rng)
        assert pow(params.alpha, 2, params.p) != 1
        assert pow(params.alpha, params.q, params.p) != 1

    def test_1024_bit_fixture_is_valid(self, params1024):
        assert params1024.p.bit_length() == 1024
        elgamal.validate_domain_params(params1024)

    def test_256_bit_fixture_is_valid(self, params256):
        assert params256.p.bit_length() == 256
        elgamal.validate_domain_params(params256)

    def test_rejects_tiny_bit_length(self):
        with pytest.raises(InvalidParameterError):
            elgamal.generate_domain_params(8)

    def test_validate_rejects_non_safe_prime(self):
        with pytest.raises(InvalidParameterError):
            elgamal.validate_domain_params(elgamal.DomainParams(p=25, alpha=2))


class TestKeygen:
    def test_worked_example(self, params23):
        # a=6 over p=23, alpha=5 gives beta=8 by repeated multiplication
        assert naive_mod_pow(5, 6, 23) == 8

    def test_beta_recomputes(self, params256, rng):
        kp = elgamal.keygen(params256, rng)
        assert pow(params256.alpha, kp.private_a, params256.p) == kp.public_beta

    def test_private_key_range(self, params23, rng):
        for _ in range(200):
            kp = elgamal.keygen(params23, rng)
            assert 1 < kp.private_a < params23.p - 2

    def test_randomized(self, params256, rng):
        keys = {elgamal.keygen(params256, rng).private_a for _ in range(5)}
        assert len(keys) == 5


class TestEncryptDecrypt:
    def test_worked_example(self, params23):
        ct = elgamal.encrypt(params23, beta=8, x=9, k_override=3)
        assert (ct.y1, ct.y2) == (10, 8)
        assert elgamal.decrypt(params23, 6, ct) == 9

    def test_decrypt_worked_example_oracle(self, params23):
        # oracle: y1^a by repeated multiplication, invert by scanning
        y1a = naive_mod_pow(10, 6, 23)
        inv = next(v for v in range(1, 23) if v * y1a % 23 == 1)
        assert inv == 4
        assert 8 * inv % 23 == 9

    def test_exhaustive_small_field(self, params23):
        # all x in [2, 21], all k in [2, 20], a = 6
        kp_beta = pow(5, 6, 23)
        for x in range(2, 22):
            for k in range(2, 21):
                ct = elgamal.encrypt(params23, kp_beta, x, k_override=k)
                assert ct.y1 == naive_mod_pow(5, k, 23)
                assert ct.y2 == x * naive_mod_pow(kp_beta, k, 23) % 23
                assert elgamal.decrypt(params23, 6, ct) == x

    def test_x_equals_one_trivial_identity(self, params23):
        # x=1 is below the message range, but y2 = beta^k algebraically
        ct = elgamal.encrypt(params23, 8, 2, k_override=5)
        assert ct.y2 == 2 * naive_mod_pow(8, 5, 23) % 23

    def test_random_roundtrip_1000(self, params23, rng):
        beta = pow(5, 6, 23)
        for _ in range(1000):
            x = rng.randrange(2, 22)
            ct = elgamal.encrypt(params23, beta, x, rand=rng)
            assert elgamal.decrypt(params23, 6, ct) == x

    def test_probabilistic_encryption(self, params23, rng):
        beta = pow(5, 6, 23)
        cts = {elgamal.encrypt(params23, beta, 9, rand=rng) for _ in range(100)}
        assert len(cts) >= 2

    def test_message_out_of_range(self, params23):
        for x in (0, 1, 22, 23, 100):
            with pytest.raises(MessageTooLargeError):
                elgamal.encrypt(params23, 8, x)

    def test_ephemeral_out_of_range(self, params23):
        with pytest.raises(InvalidEphemeralError):
            elgamal.encrypt(params23, 8, 9, k_override=1)
        with pytest.raises(InvalidEphemeralError):
            elgamal.encrypt(params23, 8, 9, k_override=21)

    def test_decrypt_is_total_on_degenerate_y1(self, params23):
        # (y1=1, y2=x): never produced by encrypt but decrypt handles it
        assert elgamal.decrypt(params23, 6, elgamal.Ciphertext(1, 9)) == 9

    def test_decrypt_rejects_out_of_range(self, params23):
        with pytest.raises(CorruptCiphertextError):
            elgamal.decrypt(params23, 6, elgamal.Ciphertext(0, 9))
        with pytest.raises(CorruptCiphertextError):
            elgamal.decrypt(params23, 6, elgamal.Ciphertext(10, 23))

    def test_roundtrip_large_params(self, params1024, rng):
        kp = elgamal.keygen(params1024, rng)
        x = rng.randrange(2, 10**200)
        ct = elgamal.encrypt(params1024, kp.public_beta, x, rand=rng)
        assert elgamal.decrypt(params1024, kp.private_a, ct) == x


class TestSignatures:
    def test_sign_verify_roundtrip_100(self, params256, rng):
        kp = elgamal.keygen(params256, rng)
        for _ in range(100):
            digest = rng.getrandbits(256).to_bytes(32, "big")
            sig = elgamal.sign(params256, kp.private_a, digest, rand=rng)
            assert elgamal.verify(params256, kp.public_beta, digest, sig)

    def test_wrong_digest_fails(self, params256, rng):
        kp = elgamal.keygen(params256, rng)
        for _ in range(30):
            d1 = rng.getrandbits(256).to_bytes(32, "big")
            d2 = rng.getrandbits(256).to_bytes(32, "big")
            if d1 == d2:
                continue
            sig = elgamal.sign(params256, kp.private_a, d1, rand=rng)
            assert not elgamal.verify(params256, kp.public_beta, d2, sig)

    def test_tampered_signature_fails(self, params256, rng):
        kp = elgamal.keypair = elgamal.keygen(params256, rng)
        digest = hashlib.sha256(b"deed body").digest()
        sig = elgamal.sign(params256, kp.private_a, digest, rand=rng)
        for bit in (1, 1 << 5, 1 << 100):
            assert not elgamal.verify(
                params256, kp.public_beta, digest, elgamal.Signature(sig.r ^ bit, sig.s)
            )
            assert not elgamal.verify(
                params256, kp.public_beta, digest, elgamal.Signature(sig.r, sig.s ^ bit)
            )

    def test_forgery_rate_at_small_scale(self, params23, rng):
        kp = elgamal.keygen(params23, rng)
        digest = hashlib.sha256(b"x").digest()
        hits = sum(
            elgamal.verify(
                params23,
                kp.public_beta,
                digest,
                elgamal.Signature(rng.randrange(1, 23), rng.randrange(0, 22)),
            )
            for _ in range(500)
        )
        assert hits < 50  # < 10% over 500 trials

    def test_verify_never_raises_on_garbage(self, params256):
        assert not elgamal.verify(params256, 5, b"short", elgamal.Signature(1, 1))
        assert not elgamal.verify(params256, 5, bytes(32), elgamal.Signature(0, 0))
        assert not elgamal.verify(params256, 5, bytes(32), elgamal.Signature("x", None))

    def test_sign_requires_32_byte_digest(self, params256, rng):
        kp = elgamal.keygen(params256, rng)
        with pytest.raises(InvalidParameterError):
            elgamal.sign(params256, kp.private_a, b"too short")


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=2, max_value=21), st.integers(min_value=2, max_value=20))
def test_encrypt_decrypt_property_small_field(x, k):
    params = elgamal.DomainParams(p=23, alpha=5)
    beta = pow(5, 6, 23)
    assert elgamal.decrypt(params, 6, elgamal.encrypt(params, beta, x, k_override=k)) == x
