"""Land registration department: encrypted record registration, the
owner index, challenge-response login, and ownership transfer.

The registry never holds decryption keys. Records are returned as stored
ciphertext for client-side decryption; on transfer, the new record is
rebuilt from the signed deed rather than by decrypting the old one.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import certs, elgamal, pipeline
from .errors import (
    BadSignatureError,
    DeedNotFinalizedError,
    DuplicateActiveRecordError,
    ExpiredChallengeError,
    InvalidCertificateError,
    InvalidParameterError,
    NoActiveRecordError,
    ReplayedChallengeError,
    SellerNotOwnerError,
    SignatureInvalidError,
    UnauthorizedError,
)
from .ledger import ZERO32, Chain, TransactionRecord, TxKind

CHALLENGE_TTL = 300
SESSION_TTL = 1800

RECORD_TEMPLATE = (
    "Seller: {seller}, Buyer: {buyer}, Land information: "
    "Dag number: {dag}, Khatiayan number: {khatiayan}, "
    "Area:{area} {unit}, Transaction ID: {txid}"
)


@dataclass(frozen=True)
class LandInfo:
    dag_number: int
    khatiayan_number: int
    area: str
    unit: str = "Shotangsho"

    def __post_init__(self):
        if self.dag_number <= 0 or self.khatiayan_number <= 0:
            raise InvalidParameterError("dag and khatiayan numbers must be positive")
        try:
            if float(self.area) <= 0:
                raise ValueError
        except ValueError:
            raise InvalidParameterError(f"area must be a positive decimal, got {self.area!r}") from None
        if not self.unit:
            raise InvalidParameterError("area unit must be non-empty")

    @property
    def identity(self) -> tuple[int, int]:
        return (self.dag_number, self.khatiayan_number)


@dataclass
class OwnerIndexEntry:
    owner_id: str
    dag_number: int
    khatiayan_number: int
    block_ids: list[int]
    active: bool = True


@dataclass(frozen=True)
class LoginChallenge:
    challenge_id: str
    nonce: bytes
    subject_id: str
    expires_at: int


def render_record(seller: str, buyer: str, land: LandInfo, txid: str) -> str:
    """Canonical single-line plaintext; spacing is fixed, including 'Area:' with no space."""
    return RECORD_TEMPLATE.format(
        seller=seller,
        buyer=buyer,
        dag=land.dag_number,
        khatiayan=land.khatiayan_number,
        area=land.area,
        unit=land.unit,
        txid=txid,
    )


@dataclass
class Registry:
    chain: Chain
    ca: certs.CertificateAuthority
    chunk_digits: int = pipeline.DEFAULT_CHUNK_DIGITS
    entries: list[OwnerIndexEntry] = field(default_factory=list)
    challenges: dict[str, LoginChallenge] = field(default_factory=dict)
    sessions: dict[str, tuple[str, int]] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.index_path.exists():
            self._load_index()

    @property
    def index_path(self) -> Path:
        return self.chain.data_dir / "owner_index.jsonl"

    # --- owner index ---------------------------------------------------------

    def _load_index(self) -> None:
        self.entries = []
        for line in self.index_path.read_text().splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            self.entries.append(OwnerIndexEntry(**row))

    def _persist_index(self) -> None:
        tmp = self.index_path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            for e in self.entries:
                fh.write(json.dumps(e.__dict__) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        tmp.replace(self.index_path)

    def active_entry(self, dag: int, khatiayan: int) -> OwnerIndexEntry | None:
        for e in self.entries:
            if e.active and e.dag_number == dag and e.khatiayan_number == khatiayan:
                return e
        return None

    def active_entry_for_owner(self, owner_id: str) -> OwnerIndexEntry | None:
        for e in self.entries:
            if e.active and e.owner_id == owner_id:
                return e
        return None

    def is_active_owner(self, owner_id: str, dag: int, khatiayan: int) -> bool:
        e = self.active_entry(dag, khatiayan)
        return e is not None and e.owner_id == owner_id

    # --- registration ----------------------------------------------------------

    def register_record(
        self,
        cert: certs.Certificate,
        land: LandInfo,
        seller_name: str,
        buyer_name: str,
        tx_label: str,
    ) -> int:
        if not self.ca.verify_certificate(cert):
            raise InvalidCertificateError("certificate does not verify against the CA")
        with self._lock:
            if self.active_entry(*land.identity) is not None:
                raise DuplicateActiveRecordError(
                    f"land ({land.dag_number}, {land.khatiayan_number}) already has an active record"
                )
            plaintext = render_record(seller_name, buyer_name, land, tx_label)
            ct = pipeline.encrypt_record(
                cert.subject_params, cert.subject_beta, plaintext, self.chunk_digits
            )
            tx = TransactionRecord(
                kind=TxKind.REGISTER,
                owner_id=cert.subject_id,
                dna_payload=ct.dna,
                key_fingerprint=ct.key_fingerprint,
                deed_hash=ZERO32,
                created_at=int(time.time()),
            )
            block_id = self.chain.append_block([tx])
            self.entries.append(
                OwnerIndexEntry(
                    owner_id=cert.subject_id,
                    dag_number=land.dag_number,
                    khatiayan_number=land.khatiayan_number,
                    block_ids=[block_id],
                )
            )
            self._persist_index()
            return block_id

    # --- login -------------------------------------------------------------------

    def issue_challenge(self, subject_id: str) -> LoginChallenge:
        challenge = LoginChallenge(
            challenge_id=secrets.token_hex(16),
            nonce=secrets.token_bytes(32),
            subject_id=subject_id,
            expires_at=int(time.time()) + CHALLENGE_TTL,
        )
        self.challenges[challenge.challenge_id] = challenge
        return challenge

    def verify_challenge(
        self, challenge_id: str, sig: elgamal.Signature, cert: certs.Certificate
    ) -> str:
        challenge = self.challenges.pop(challenge_id, None)
        if challenge is None:
            raise ReplayedChallengeError("challenge unknown or already used")
        if time.time() > challenge.expires_at:
            raise ExpiredChallengeError("challenge expired")
        if cert.subject_id != challenge.subject_id:
            raise UnauthorizedError("certificate subject does not match the challenge")
        if not self.ca.verify_certificate(cert):
            raise InvalidCertificateError("certificate does not verify against the CA")
        digest = hashlib.sha256(challenge.nonce).digest()
        if not elgamal.verify(cert.subject_params, cert.subject_beta, digest, sig):
            raise BadSignatureError("challenge signature does not verify")
        token = secrets.token_hex(32)
        self.sessions[token] = (challenge.subject_id, int(time.time()) + SESSION_TTL)
        return token

    def session_subject(self, token: str) -> str:
        entry = self.sessions.get(token)
        if entry is None or time.time() > entry[1]:
            raise UnauthorizedError("missing or expired session")
        return entry[0]

    # --- retrieval ------------------------------------------------------------------

    def retrieve_record(self, token: str, owner_id: str) -> tuple[pipeline.DnaCiphertext, int]:
        subject = self.session_subject(token)
        if subject != owner_id:
            raise UnauthorizedError("session subject does not match the requested owner")
        entry = self.active_entry_for_owner(owner_id)
        if entry is None:
            raise NoActiveRecordError(f"no active record for owner {owner_id!r}")
        block_id = entry.block_ids[-1]
        block = self.chain.get_block(block_id)
        for tx in block.transactions:
            if tx.owner_id == owner_id:
                ct = pipeline.DnaCiphertext(dna=tx.dna_payload, key_fingerprint=tx.key_fingerprint)
                return ct, block_id
        raise NoActiveRecordError(f"indexed block {block_id} holds no record for {owner_id!r}")

    # --- transfer ------------------------------------------------------------------

    def transfer_ownership(self, deed) -> int:
        if getattr(deed.state, "name", str(deed.state)) != "BANK_SIGNED":
            raise DeedNotFinalizedError(f"deed is in state {deed.state}, not BANK_SIGNED")
        digest = deed.digest()
        signers = {}
        for role in ("seller", "buyer", "bank"):
            if role not in deed.signatures:
                raise DeedNotFinalizedError(f"deed lacks the {role} signature")
            sig, serial = deed.signatures[role]
            cert = self.ca.get(serial)
            if not self.ca.verify_certificate(cert):
                raise SignatureInvalidError(f"{role} certificate invalid", role=role)
            if not elgamal.verify(cert.subject_params, cert.subject_beta, digest, sig):
                raise SignatureInvalidError(f"{role} signature does not verify", role=role)
            signers[role] = cert
        if signers["seller"].subject_id != deed.seller_id:
            raise SignatureInvalidError("seller signature not by the deed's seller", role="seller")
        if signers["buyer"].subject_id != deed.buyer_id:
            raise SignatureInvalidError("buyer signature not by the deed's buyer", role="buyer")
        if len({c.subject_id for c in signers.values()}) != 3:
            raise SignatureInvalidError("deed roles must be three distinct identities")
        with self._lock:
            land = deed.land
            entry = self.active_entry(*land.identity)
            if entry is None or entry.owner_id != deed.seller_id:
                raise SellerNotOwnerError(
                    f"{deed.seller_id!r} does not hold the active record for "
                    f"({land.dag_number}, {land.khatiayan_number})"
                )
            buyer_cert = signers["buyer"]
            plaintext = render_record(deed.seller_id, deed.buyer_id, land, deed.transaction_id)
            ct = pipeline.encrypt_record(
                buyer_cert.subject_params, buyer_cert.subject_beta, plaintext, self.chunk_digits
            )
            tx = TransactionRecord(
                kind=TxKind.TRANSFER,
                owner_id=deed.buyer_id,
                dna_payload=ct.dna,
                key_fingerprint=ct.key_fingerprint,
                deed_hash=digest,
                created_at=int(time.time()),
            )
            block_id = self.chain.append_block([tx])
            entry.active = False
            self.entries.append(
                OwnerIndexEntry(
                    owner_id=deed.buyer_id,
                    dag_number=land.dag_number,
                    khatiayan_number=land.khatiayan_number,
                    block_ids=[block_id],
                )
            )
            self._persist_index()
            return block_id
