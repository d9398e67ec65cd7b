"""HTTP facade: one process hosting the CA, advertising agency, bank-facing
deed endpoints, the registration department, and chain access.

JSON conventions: big integers travel as decimal strings, hashes as
lowercase hex, DNA payloads as plain ACGT text, timestamps as unix seconds.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import certs, elgamal, ledger, pipeline, registry as registry_mod, trading
from .errors import ChainCorruptError, LandLedgerError, UnauthorizedError

CODE_STATUS = {
    "bad-signature": 401,
    "expired-challenge": 401,
    "replayed-challenge": 401,
    "unauthorized": 403,
    "not-found": 404,
    "deed-not-found": 404,
    "listing-not-found": 404,
    "no-active-record": 404,
    "duplicate-active-record": 409,
    "already-signed": 409,
    "listing-not-open": 409,
    "deed-not-finalized": 409,
    "premature-bank-signature": 409,
    "seller-not-owner": 409,
    "not-owner": 409,
    "self-dealing": 409,
    "wrong-party": 409,
    "signature-invalid": 409,
}
DEFAULT_STATUS = 400


@dataclass
class ServiceConfig:
    data_dir: Path
    key_bits: int = elgamal.DEFAULT_KEY_BITS
    chunk_digits: int = pipeline.DEFAULT_CHUNK_DIGITS
    bank_id: str = "Bn"


@dataclass
class AppState:
    config: ServiceConfig
    params: elgamal.DomainParams
    ca: certs.CertificateAuthority
    chain: ledger.Chain
    registry: registry_mod.Registry
    platform: trading.TradingPlatform


def _load_or_create_system(config: ServiceConfig) -> tuple[elgamal.DomainParams, elgamal.KeyPair]:
    """Domain params and the CA key persist so fingerprints survive restarts."""
    path = config.data_dir / "system.json"
    if path.exists():
        raw = json.loads(path.read_text())
        params = elgamal.DomainParams(p=int(raw["p"]), alpha=int(raw["alpha"]))
        key = elgamal.KeyPair(
            params=params, private_a=int(raw["ca_private_a"]), public_beta=int(raw["ca_beta"])
        )
        return params, key
    params = elgamal.generate_domain_params(config.key_bits)
    key = elgamal.keygen(params)
    config.data_dir.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(
            {
                "p": str(params.p),
                "alpha": str(params.alpha),
                "ca_private_a": str(key.private_a),
                "ca_beta": str(key.public_beta),
            }
        )
    )
    return params, key


def build_state(config: ServiceConfig) -> AppState:
    """Wire the whole system; refuses to start on a corrupt chain."""
    config.data_dir = Path(config.data_dir)
    config.data_dir.mkdir(parents=True, exist_ok=True)
    params, ca_key = _load_or_create_system(config)
    if (config.data_dir / "chain.dat").exists():
        violation = ledger.verify_chain_dir(config.data_dir)
        if violation is not None:
            raise ChainCorruptError(
                f"chain verification failed at block {violation.position}: {violation.reason}",
                position=violation.position,
                reason=violation.reason,
            )
        chain = ledger.Chain.load(config.data_dir)
    else:
        chain = ledger.Chain.create(config.data_dir)
    ca = certs.CertificateAuthority(params, ca_key)
    reg = registry_mod.Registry(chain=chain, ca=ca, chunk_digits=config.chunk_digits)
    platform = trading.TradingPlatform(registry=reg, ca=ca, bank_id=config.bank_id)
    return AppState(
        config=config, params=params, ca=ca, chain=chain, registry=reg, platform=platform
    )


# --- JSON rendering ---------------------------------------------------------

def cert_json(cert: certs.Certificate) -> dict:
    return {
        "serial": cert.serial,
        "subject_id": cert.subject_id,
        "p": str(cert.subject_params.p),
        "alpha": str(cert.subject_params.alpha),
        "beta": str(cert.subject_beta),
        "issuer_id": cert.issuer_id,
        "issued_at": cert.issued_at,
        "expires_at": cert.expires_at,
        "ca_signature": {"r": str(cert.ca_signature.r), "s": str(cert.ca_signature.s)},
    }


def listing_json(l: trading.Listing) -> dict:
    return {
        "listing_id": l.listing_id,
        "seller_id": l.seller_id,
        "dag_number": l.land.dag_number,
        "khatiayan_number": l.land.khatiayan_number,
        "area": l.land.area,
        "unit": l.land.unit,
        "asking_price": l.asking_price,
        "currency": l.currency,
        "status": l.status.value,
        "created_at": l.created_at,
    }


def deed_json(d: trading.Deed) -> dict:
    return {
        "deed_id": d.deed_id,
        "listing_id": d.listing_id,
        "seller_id": d.seller_id,
        "buyer_id": d.buyer_id,
        "dag_number": d.land.dag_number,
        "khatiayan_number": d.land.khatiayan_number,
        "area": d.land.area,
        "unit": d.land.unit,
        "price": d.price,
        "transaction_id": d.transaction_id,
        "created_at": d.created_at,
        "state": d.state.value,
        "digest": d.digest().hex(),
        "signed_roles": sorted(d.signatures),
    }


def block_json(b: ledger.Block) -> dict:
    return {
        "block_id": b.header.block_id,
        "prev_hash": b.header.prev_hash.hex(),
        "tx_count": b.header.tx_count,
        "nonce": b.header.nonce,
        "merkle_root": b.header.merkle_root.hex(),
        "timestamp": b.header.timestamp,
        "hash": ledger.block_hash(b).hex(),
        "transactions": [
            {
                "tx_id": tx.tx_id.hex(),
                "kind": tx.kind.name,
                "owner_id": tx.owner_id,
                "dna_payload": tx.dna_payload,
                "key_fingerprint": tx.key_fingerprint.hex(),
                "deed_hash": tx.deed_hash.hex(),
                "created_at": tx.created_at,
            }
            for tx in b.transactions
        ],
    }


# --- request bodies ---------------------------------------------------------

class SignatureBody(BaseModel):
    r: str
    s: str

    def to_signature(self) -> elgamal.Signature:
        return elgamal.Signature(r=int(self.r), s=int(self.s))


class IssueCertBody(BaseModel):
    subject_id: str
    beta: str
    validity_days: int = 365


class ChallengeBody(BaseModel):
    subject_id: str


class SessionBody(BaseModel):
    challenge_id: str
    cert_serial: int
    signature: SignatureBody


class RegisterRecordBody(BaseModel):
    cert_serial: int
    dag_number: int
    khatiayan_number: int
    area: str
    unit: str = "Shotangsho"
    seller_name: str
    buyer_name: str
    tx_label: str


class PostListingBody(BaseModel):
    cert_serial: int
    dag_number: int
    khatiayan_number: int
    area: str
    unit: str = "Shotangsho"
    asking_price: str


class CreateDeedBody(BaseModel):
    listing_id: str
    agreed_price: str


class SignDeedBody(BaseModel):
    role: str
    cert_serial: int
    signature: SignatureBody


def build_app(state: AppState) -> FastAPI:
    app = FastAPI(title="landledger")
    app.state.landledger = state

    def bearer_token(authorization: str = Header(default="")) -> str:
        if not authorization.startswith("Bearer "):
            raise UnauthorizedError("missing bearer token")
        return authorization.removeprefix("Bearer ")

    @app.exception_handler(LandLedgerError)
    async def handle_domain_error(_request: Request, exc: LandLedgerError):
        return JSONResponse(
            status_code=CODE_STATUS.get(exc.code, DEFAULT_STATUS),
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "tip": state.chain.tip.header.block_id}

    @app.get("/ca/params")
    def ca_params():
        return {
            "p": str(state.params.p),
            "alpha": str(state.params.alpha),
            "key_bits": state.params.bit_length,
            "chunk_digits": state.config.chunk_digits,
            "bank_id": state.config.bank_id,
            "ca_id": state.ca.ca_id,
            "ca_beta": str(state.ca.public_beta),
        }

    @app.post("/ca/certificates", status_code=201)
    def issue_certificate(body: IssueCertBody):
        cert = state.ca.issue_certificate(
            subject_id=body.subject_id,
            subject_beta=int(body.beta),
            subject_params=state.params,
            validity_days=body.validity_days,
        )
        return cert_json(cert)

    @app.get("/ca/certificates/{serial}")
    def get_certificate(serial: int):
        return cert_json(state.ca.get(serial))

    @app.post("/auth/challenges", status_code=201)
    def issue_challenge(body: ChallengeBody):
        ch = state.registry.issue_challenge(body.subject_id)
        return {
            "challenge_id": ch.challenge_id,
            "nonce": ch.nonce.hex(),
            "subject_id": ch.subject_id,
            "expires_at": ch.expires_at,
        }

    @app.post("/auth/sessions", status_code=201)
    def create_session(body: SessionBody):
        cert = state.ca.get(body.cert_serial)
        token = state.registry.verify_challenge(
            body.challenge_id, body.signature.to_signature(), cert
        )
        return {
            "token": token,
            "subject_id": cert.subject_id,
            "expires_at": int(time.time()) + registry_mod.SESSION_TTL,
        }

    @app.get("/lrd/records")
    def retrieve_record(owner: str, token: str = Depends(bearer_token)):
        ct, block_id = state.registry.retrieve_record(token, owner)
        return {
            "owner_id": owner,
            "dna": ct.dna,
            "key_fingerprint": ct.key_fingerprint.hex(),
            "block_id": block_id,
        }

    @app.post("/lrd/records", status_code=201)
    def register_record(body: RegisterRecordBody):
        cert = state.ca.get(body.cert_serial)
        land = registry_mod.LandInfo(
            dag_number=body.dag_number,
            khatiayan_number=body.khatiayan_number,
            area=body.area,
            unit=body.unit,
        )
        block_id = state.registry.register_record(
            cert, land, body.seller_name, body.buyer_name, body.tx_label
        )
        return {"block_id": block_id, "owner_id": cert.subject_id}

    @app.get("/listings")
    def search_listings(
        dag: int | None = Query(default=None),
        khatiayan: int | None = Query(default=None),
        min_price: float | None = Query(default=None),
        max_price: float | None = Query(default=None),
        status: str | None = Query(default=None),
    ):
        status_filter = trading.ListingStatus(status) if status else None
        found = state.platform.search_listings(
            dag=dag,
            khatiayan=khatiayan,
            min_price=min_price,
            max_price=max_price,
            status=status_filter,
        )
        return [listing_json(l) for l in found]

    @app.post("/listings", status_code=201)
    def post_listing(body: PostListingBody, token: str = Depends(bearer_token)):
        cert = state.ca.get(body.cert_serial)
        land = registry_mod.LandInfo(
            dag_number=body.dag_number,
            khatiayan_number=body.khatiayan_number,
            area=body.area,
            unit=body.unit,
        )
        listing = state.platform.post_listing(token, cert, land, body.asking_price)
        return listing_json(listing)

    @app.post("/listings/{listing_id}/withdraw")
    def withdraw_listing(listing_id: str, token: str = Depends(bearer_token)):
        return listing_json(state.platform.withdraw_listing(token, listing_id))

    @app.post("/deeds", status_code=201)
    def create_deed(body: CreateDeedBody, token: str = Depends(bearer_token)):
        deed = state.platform.create_deed(body.listing_id, token, body.agreed_price)
        return deed_json(deed)

    @app.get("/deeds/{deed_id}")
    def get_deed(deed_id: str):
        return deed_json(state.platform.get_deed(deed_id))

    @app.post("/deeds/{deed_id}/signatures")
    def sign_deed(deed_id: str, body: SignDeedBody):
        cert = state.ca.get(body.cert_serial)
        deed = state.platform.sign_deed(
            deed_id, body.role, body.signature.to_signature(), cert
        )
        return deed_json(deed)

    @app.post("/deeds/{deed_id}/abandon")
    def abandon_deed(deed_id: str, token: str = Depends(bearer_token)):
        return deed_json(state.platform.abandon_deed(deed_id, token))

    @app.post("/deeds/{deed_id}/settle")
    def settle_deed(deed_id: str):
        block_id = state.platform.settle_and_register(deed_id)
        return {"block_id": block_id, "deed_id": deed_id}

    @app.get("/chain/blocks/{block_id}")
    def get_block(block_id: int):
        return block_json(state.chain.get_block(block_id))

    @app.get("/chain/tip")
    def chain_tip():
        tip = state.chain.tip
        return {"block_id": tip.header.block_id, "hash": ledger.block_hash(tip).hex()}

    @app.get("/chain/verify")
    def chain_verify():
        violation = state.chain.verify()
        if violation is None:
            return {"ok": True}
        return {"ok": False, "position": violation.position, "reason": violation.reason}

    return app


def create_app(config: ServiceConfig) -> FastAPI:
    return build_app(build_state(config))
