"""Certificate authority: binds identities to ElGamal public keys.

A certificate is an ElGamal signature by the CA over the canonical body
(serial, subject, group params, public key, validity window).
"""

from __future__ import annotations

import hashlib
import itertools
import struct
import threading
import time
from dataclasses import dataclass

from . import elgamal
from .errors import InvalidCertificateError, InvalidPublicKeyError

DAY = 86400


@dataclass(frozen=True)
class Certificate:
    serial: int
    subject_id: str
    subject_params: elgamal.DomainParams
    subject_beta: int
    issuer_id: str
    issued_at: int
    expires_at: int
    ca_signature: elgamal.Signature

    def body_digest(self) -> bytes:
        w = self.subject_params.key_bytes
        subject = self.subject_id.encode("utf-8")
        issuer = self.issuer_id.encode("utf-8")
        body = b"".join(
            (
                struct.pack(">Q", self.serial),
                struct.pack(">H", len(subject)),
                subject,
                struct.pack(">H", len(issuer)),
                issuer,
                struct.pack(">H", w),
                self.subject_params.p.to_bytes(w, "big"),
                self.subject_params.alpha.to_bytes(w, "big"),
                self.subject_beta.to_bytes(w, "big"),
                struct.pack(">QQ", self.issued_at, self.expires_at),
            )
        )
        return hashlib.sha256(body).digest()


class CertificateAuthority:
    """Issues and verifies certificates; keeps an in-memory registry by serial."""

    def __init__(self, params: elgamal.DomainParams, keypair: elgamal.KeyPair,
                 ca_id: str = "CA"):
        self.params = params
        self.keypair = keypair
        self.ca_id = ca_id
        self.issued: dict[int, Certificate] = {}
        self._serials = itertools.count(1)
        self._lock = threading.Lock()

    @property
    def public_beta(self) -> int:
        return self.keypair.public_beta

    def issue_certificate(
        self,
        subject_id: str,
        subject_beta: int,
        subject_params: elgamal.DomainParams,
        validity_days: int = 365,
        now: int | None = None,
    ) -> Certificate:
        if not 2 <= subject_beta <= subject_params.p - 2:
            raise InvalidPublicKeyError("public key out of range for the group")
        if validity_days <= 0:
            raise InvalidCertificateError("validity must be at least one day")
        now = int(time.time()) if now is None else now
        with self._lock:
            serial = next(self._serials)
            unsigned = Certificate(
                serial=serial,
                subject_id=subject_id,
                subject_params=subject_params,
                subject_beta=subject_beta,
                issuer_id=self.ca_id,
                issued_at=now,
                expires_at=now + validity_days * DAY,
                ca_signature=elgamal.Signature(0, 0),
            )
            sig = elgamal.sign(self.params, self.keypair.private_a, unsigned.body_digest())
            cert = Certificate(**{**unsigned.__dict__, "ca_signature": sig})
            self.issued[serial] = cert
            return cert

    def get(self, serial: int) -> Certificate:
        try:
            return self.issued[serial]
        except KeyError:
            raise InvalidCertificateError(f"unknown certificate serial {serial}") from None

    def verify_certificate(self, cert: Certificate, now: int | None = None) -> bool:
        return verify_certificate(self.params, self.public_beta, cert, now)


def verify_certificate(
    ca_params: elgamal.DomainParams, ca_beta: int, cert: Certificate,
    now: int | None = None,
) -> bool:
    """Signature valid and the validity window covers ``now``."""
    now = int(time.time()) if now is None else now
    if not cert.issued_at <= now < cert.expires_at:
        return False
    return elgamal.verify(ca_params, ca_beta, cert.body_digest(), cert.ca_signature)
