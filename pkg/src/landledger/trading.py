"""Advertising agency and deed lifecycle: listings, deed creation, the
seller/buyer/bank signing state machine, and settlement into the registry.
"""

from __future__ import annotations

import hashlib
import secrets
import struct
import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum

from . import certs, elgamal
from .errors import (
    AlreadySignedError,
    BadSignatureError,
    DeedNotFinalizedError,
    DeedNotFoundError,
    InvalidCertificateError,
    ListingNotFoundError,
    ListingNotOpenError,
    NotOwnerError,
    PrematureBankSignatureError,
    SelfDealingError,
    UnauthorizedError,
    WrongPartyError,
)
from .registry import LandInfo, Registry

_BASE36 = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class ListingStatus(Enum):
    OPEN = "OPEN"
    UNDER_DEED = "UNDER_DEED"
    SOLD = "SOLD"
    WITHDRAWN = "WITHDRAWN"


class DeedState(Enum):
    DRAFT = "DRAFT"
    PARTIALLY_SIGNED = "PARTIALLY_SIGNED"
    PARTIES_SIGNED = "PARTIES_SIGNED"
    BANK_SIGNED = "BANK_SIGNED"
    REGISTERED = "REGISTERED"
    ABANDONED = "ABANDONED"


@dataclass
class Listing:
    listing_id: str
    seller_id: str
    land: LandInfo
    asking_price: str
    currency: str = "BDT"
    status: ListingStatus = ListingStatus.OPEN
    created_at: int = field(default_factory=lambda: int(time.time()))


@dataclass
class Deed:
    deed_id: str
    listing_id: str
    seller_id: str
    buyer_id: str
    land: LandInfo
    price: str
    transaction_id: str
    created_at: int
    signatures: dict[str, tuple[elgamal.Signature, int]] = field(default_factory=dict)
    state: DeedState = DeedState.DRAFT

    def digest(self) -> bytes:
        """SHA-256 over the field-order-fixed serialization; signatures excluded."""
        def text(v: str) -> bytes:
            raw = v.encode("utf-8")
            return struct.pack(">H", len(raw)) + raw

        body = b"\x01" + b"".join(
            (
                text(self.deed_id),
                text(self.seller_id),
                text(self.buyer_id),
                struct.pack(">QQ", self.land.dag_number, self.land.khatiayan_number),
                text(self.land.area),
                text(self.land.unit),
                text(self.price),
                text(self.transaction_id),
                struct.pack(">Q", self.created_at),
            )
        )
        return hashlib.sha256(body).digest()


def new_transaction_id(rand=None) -> str:
    rand = rand or secrets.SystemRandom()
    return "BN" + "".join(rand.choice(_BASE36) for _ in range(7))


@dataclass
class TradingPlatform:
    registry: Registry
    ca: certs.CertificateAuthority
    bank_id: str = "Bn"
    listings: dict[str, Listing] = field(default_factory=dict)
    deeds: dict[str, Deed] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    # --- listings ---------------------------------------------------------

    def post_listing(
        self, token: str, cert: certs.Certificate, land: LandInfo, asking_price: str
    ) -> Listing:
        subject = self.registry.session_subject(token)
        if cert.subject_id != subject:
            raise UnauthorizedError("certificate subject does not match the session")
        if not self.ca.verify_certificate(cert):
            raise InvalidCertificateError("certificate does not verify against the CA")
        if not self.registry.is_active_owner(subject, *land.identity):
            raise NotOwnerError(f"{subject!r} does not own land {land.identity}")
        with self._lock:
            for l in self.listings.values():
                if l.land.identity == land.identity and l.status in (
                    ListingStatus.OPEN,
                    ListingStatus.UNDER_DEED,
                ):
                    raise ListingNotOpenError("land already has a live listing")
            listing = Listing(
                listing_id=uuid.uuid4().hex,
                seller_id=subject,
                land=land,
                asking_price=asking_price,
            )
            self.listings[listing.listing_id] = listing
            return listing

    def get_listing(self, listing_id: str) -> Listing:
        try:
            return self.listings[listing_id]
        except KeyError:
            raise ListingNotFoundError(f"unknown listing {listing_id!r}") from None

    def search_listings(
        self,
        dag: int | None = None,
        khatiayan: int | None = None,
        min_price: float | None = None,
        max_price: float | None = None,
        status: ListingStatus | None = None,
    ) -> list[Listing]:
        found = []
        for l in self.listings.values():
            if dag is not None and l.land.dag_number != dag:
                continue
            if khatiayan is not None and l.land.khatiayan_number != khatiayan:
                continue
            if min_price is not None and float(l.asking_price) < min_price:
                continue
            if max_price is not None and float(l.asking_price) > max_price:
                continue
            if status is not None and l.status != status:
                continue
            found.append(l)
        return sorted(found, key=lambda l: l.created_at, reverse=True)

    def withdraw_listing(self, token: str, listing_id: str) -> Listing:
        subject = self.registry.session_subject(token)
        with self._lock:
            listing = self.get_listing(listing_id)
            if listing.seller_id != subject:
                raise UnauthorizedError("only the seller may withdraw a listing")
            if listing.status != ListingStatus.OPEN:
                raise ListingNotOpenError(f"listing is {listing.status.value}, not OPEN")
            listing.status = ListingStatus.WITHDRAWN
            return listing

    # --- deeds ------------------------------------------------------------

    def create_deed(self, listing_id: str, buyer_token: str, agreed_price: str) -> Deed:
        buyer = self.registry.session_subject(buyer_token)
        with self._lock:
            listing = self.get_listing(listing_id)
            if listing.status != ListingStatus.OPEN:
                raise ListingNotOpenError(f"listing is {listing.status.value}, not OPEN")
            if buyer == listing.seller_id:
                raise SelfDealingError("buyer and seller must differ")
            deed = Deed(
                deed_id=uuid.uuid4().hex,
                listing_id=listing_id,
                seller_id=listing.seller_id,
                buyer_id=buyer,
                land=listing.land,
                price=agreed_price,
                transaction_id=new_transaction_id(),
                created_at=int(time.time()),
            )
            listing.status = ListingStatus.UNDER_DEED
            self.deeds[deed.deed_id] = deed
            return deed

    def get_deed(self, deed_id: str) -> Deed:
        try:
            return self.deeds[deed_id]
        except KeyError:
            raise DeedNotFoundError(f"unknown deed {deed_id!r}") from None

    def sign_deed(
        self, deed_id: str, role: str, sig: elgamal.Signature, cert: certs.Certificate
    ) -> Deed:
        if role not in ("seller", "buyer", "bank"):
            raise WrongPartyError(f"unknown signing role {role!r}")
        with self._lock:
            deed = self.get_deed(deed_id)
            if deed.state in (DeedState.REGISTERED, DeedState.ABANDONED):
                raise DeedNotFinalizedError(f"deed is {deed.state.value}; signing closed")
            if role in deed.signatures:
                raise AlreadySignedError(f"role {role} already signed", role=role)
            expected = {
                "seller": deed.seller_id,
                "buyer": deed.buyer_id,
                "bank": self.bank_id,
            }[role]
            if cert.subject_id != expected:
                raise WrongPartyError(
                    f"certificate subject {cert.subject_id!r} is not the deed's {role} ({expected!r})"
                )
            if role == "bank" and deed.state != DeedState.PARTIES_SIGNED:
                raise PrematureBankSignatureError(
                    "bank may sign only after both parties have signed"
                )
            if role != "bank" and deed.state not in (
                DeedState.DRAFT,
                DeedState.PARTIALLY_SIGNED,
            ):
                raise AlreadySignedError(f"no party signature accepted in state {deed.state.value}")
            if not self.ca.verify_certificate(cert):
                raise InvalidCertificateError("certificate does not verify against the CA")
            if not elgamal.verify(cert.subject_params, cert.subject_beta, deed.digest(), sig):
                raise BadSignatureError(f"{role} signature does not verify over the deed digest")
            deed.signatures[role] = (sig, cert.serial)
            parties = {"seller", "buyer"} & set(deed.signatures)
            if "bank" in deed.signatures:
                deed.state = DeedState.BANK_SIGNED
            elif len(parties) == 2:
                deed.state = DeedState.PARTIES_SIGNED
            else:
                deed.state = DeedState.PARTIALLY_SIGNED
            return deed

    def abandon_deed(self, deed_id: str, token: str) -> Deed:
        """Either party may walk away before the bank signs; listing reopens."""
        subject = self.registry.session_subject(token)
        with self._lock:
            deed = self.get_deed(deed_id)
            if subject not in (deed.seller_id, deed.buyer_id):
                raise UnauthorizedError("only deed parties may abandon it")
            if deed.state not in (
                DeedState.DRAFT,
                DeedState.PARTIALLY_SIGNED,
                DeedState.PARTIES_SIGNED,
            ):
                raise DeedNotFinalizedError(f"deed is {deed.state.value}; cannot abandon")
            deed.state = DeedState.ABANDONED
            self.listings[deed.listing_id].status = ListingStatus.OPEN
            return deed

    # --- settlement ---------------------------------------------------------

    def settle_and_register(self, deed_id: str) -> int:
        with self._lock:
            deed = self.get_deed(deed_id)
            if deed.state != DeedState.BANK_SIGNED:
                raise DeedNotFinalizedError(f"deed is {deed.state.value}, not BANK_SIGNED")
            block_id = self.registry.transfer_ownership(deed)
            deed.state = DeedState.REGISTERED
            self.listings[deed.listing_id].status = ListingStatus.SOLD
            return block_id
