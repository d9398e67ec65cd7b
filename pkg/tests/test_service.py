import hashlib
import threading

import pytest
from fastapi.testclient import TestClient

from landledger import elgamal, pipeline
from landledger.service import AppState, ServiceConfig, build_app, build_state
from tests.conftest import A256, CHUNK_256, P256


def make_state(tmp_path) -> AppState:
    # pre-seed system.json with the frozen group so startup skips prime search
    tmp_path.mkdir(parents=True, exist_ok=True)
    params = elgamal.DomainParams(p=P256, alpha=A256)
    ca_key = elgamal.keygen(params)
    (tmp_path / "system.json").write_text(
        '{"p": "%d", "alpha": "%d", "ca_private_a": "%d", "ca_beta": "%d"}'
        % (params.p, params.alpha, ca_key.private_a, ca_key.public_beta)
    )
    return build_state(ServiceConfig(data_dir=tmp_path, key_bits=256, chunk_digits=CHUNK_256))


@pytest.fixture()
def client(tmp_path):
    state = make_state(tmp_path / "data")
    with TestClient(build_app(state)) as c:
        yield c


class Actor:
    def __init__(self, client, subject_id):
        self.client = client
        self.subject_id = subject_id
        info = client.get("/ca/params").json()
        self.params = elgamal.DomainParams(p=int(info["p"]), alpha=int(info["alpha"]))
        self.keys = elgamal.keygen(self.params)
        self.serial = client.post(
            "/ca/certificates",
            json={"subject_id": subject_id, "beta": str(self.keys.public_beta)},
        ).json()["serial"]

    def sign(self, digest: bytes) -> dict:
        sig = elgamal.sign(self.params, self.keys.private_a, digest)
        return {"r": str(sig.r), "s": str(sig.s)}

    def login(self) -> dict:
        ch = self.client.post("/auth/challenges", json={"subject_id": self.subject_id}).json()
        resp = self.client.post("/auth/sessions", json={
            "challenge_id": ch["challenge_id"],
            "cert_serial": self.serial,
            "signature": self.sign(hashlib.sha256(bytes.fromhex(ch["nonce"])).digest()),
        })
        assert resp.status_code == 201, resp.text
        return {"Authorization": f"Bearer {resp.json()['token']}"}

    def register_land(self, dag, khatiayan, area="2000"):
        resp = self.client.post("/lrd/records", json={
            "cert_serial": self.serial,
            "dag_number": dag, "khatiayan_number": khatiayan, "area": area,
            "seller_name": self.subject_id, "buyer_name": self.subject_id,
            "tx_label": "BNSEED01",
        })
        assert resp.status_code == 201, resp.text
        return resp.json()["block_id"]


class TestBootstrap:
    def test_empty_dir_gets_genesis_and_health(self, client):
        assert client.get("/health").json() == {"status": "ok", "tip": 0}
        genesis = client.get("/chain/blocks/0").json()
        assert genesis["prev_hash"] == "00" * 32

    def test_tampered_chain_refuses_startup(self, tmp_path):
        state = make_state(tmp_path / "data")
        actor = Actor(TestClient(build_app(state)), "Mr. X")
        actor.register_land(1, 1)
        chain_file = tmp_path / "data" / "chain.dat"
        raw = bytearray(chain_file.read_bytes())
        raw[len(raw) // 2] ^= 0xFF
        chain_file.write_bytes(bytes(raw))
        from landledger.errors import ChainCorruptError

        with pytest.raises(ChainCorruptError):
            build_state(ServiceConfig(data_dir=tmp_path / "data", key_bits=256,
                                      chunk_digits=CHUNK_256))


class TestErrorEnvelope:
    def test_unknown_block(self, client):
        resp = client.get("/chain/blocks/999")
        assert resp.status_code == 404
        body = resp.json()
        assert body["code"] == "not-found" and "message" in body

    def test_missing_bearer(self, client):
        resp = client.get("/lrd/records", params={"owner": "Mr. X"})
        assert resp.status_code == 403
        assert resp.json()["code"] == "unauthorized"

    def test_replayed_challenge(self, client):
        actor = Actor(client, "Mr. X")
        ch = client.post("/auth/challenges", json={"subject_id": "Mr. X"}).json()
        sig = actor.sign(hashlib.sha256(bytes.fromhex(ch["nonce"])).digest())
        body = {"challenge_id": ch["challenge_id"], "cert_serial": actor.serial, "signature": sig}
        assert client.post("/auth/sessions", json=body).status_code == 201
        resp = client.post("/auth/sessions", json=body)
        assert resp.status_code == 401
        assert resp.json()["code"] == "replayed-challenge"


class TestFullFlow:
    def test_end_to_end_trade(self, client):
        seller = Actor(client, "Mr. X")
        buyer = Actor(client, "Mr. Y")
        bank = Actor(client, "Bn")
        seller.register_land(8000, 3000)

        seller_auth = seller.login()
        listing = client.post("/listings", json={
            "cert_serial": seller.serial, "dag_number": 8000, "khatiayan_number": 3000,
            "area": "2000", "asking_price": "500000",
        }, headers=seller_auth).json()
        assert listing["status"] == "OPEN"

        found = client.get("/listings", params={"dag": 8000, "status": "OPEN"}).json()
        assert [l["listing_id"] for l in found] == [listing["listing_id"]]

        buyer_auth = buyer.login()
        deed = client.post("/deeds", json={
            "listing_id": listing["listing_id"], "agreed_price": "480000",
        }, headers=buyer_auth).json()
        assert deed["state"] == "DRAFT"
        digest = bytes.fromhex(deed["digest"])

        states = []
        for role, actor in (("seller", seller), ("buyer", buyer), ("bank", bank)):
            resp = client.post(f"/deeds/{deed['deed_id']}/signatures", json={
                "role": role, "cert_serial": actor.serial, "signature": actor.sign(digest),
            })
            assert resp.status_code == 200, resp.text
            states.append(resp.json()["state"])
        assert states == ["PARTIALLY_SIGNED", "PARTIES_SIGNED", "BANK_SIGNED"]

        settled = client.post(f"/deeds/{deed['deed_id']}/settle").json()
        assert client.get(f"/deeds/{deed['deed_id']}").json()["state"] == "REGISTERED"

        rec = client.get("/lrd/records", params={"owner": "Mr. Y"}, headers=buyer_auth).json()
        assert rec["block_id"] == settled["block_id"]
        ct = pipeline.DnaCiphertext(
            dna=rec["dna"], key_fingerprint=bytes.fromhex(rec["key_fingerprint"])
        )
        plaintext = pipeline.decrypt_record(buyer.params, buyer.keys.private_a, ct)
        assert "Buyer: Mr. Y" in plaintext and "Dag number: 8000" in plaintext

        gone = client.get("/lrd/records", params={"owner": "Mr. X"}, headers=seller_auth)
        assert gone.status_code == 404 and gone.json()["code"] == "no-active-record"
        assert client.get("/chain/verify").json() == {"ok": True}

    def test_premature_bank_signature_code(self, client):
        seller = Actor(client, "S1")
        buyer = Actor(client, "B1")
        bank = Actor(client, "Bn")
        seller.register_land(77, 78)
        listing = client.post("/listings", json={
            "cert_serial": seller.serial, "dag_number": 77, "khatiayan_number": 78,
            "area": "10", "asking_price": "1",
        }, headers=seller.login()).json()
        deed = client.post("/deeds", json={
            "listing_id": listing["listing_id"], "agreed_price": "1",
        }, headers=buyer.login()).json()
        resp = client.post(f"/deeds/{deed['deed_id']}/signatures", json={
            "role": "bank", "cert_serial": bank.serial,
            "signature": bank.sign(bytes.fromhex(deed["digest"])),
        })
        assert resp.status_code == 409
        assert resp.json()["code"] == "premature-bank-signature"


class TestPrivacy:
    def test_record_payloads_are_dna_only(self, client):
        import re

        actor = Actor(client, "Mr. X")
        actor.register_land(8000, 3000)
        rec = client.get("/lrd/records", params={"owner": "Mr. X"}, headers=actor.login()).json()
        assert re.fullmatch(r"[ACGT]+", rec["dna"])
        block = client.get("/chain/blocks/1").json()
        for tx in block["transactions"]:
            assert re.fullmatch(r"[ACGT]*", tx["dna_payload"])

    def test_no_plaintext_on_disk_or_wire(self, client, tmp_path):
        actor = Actor(client, "Mr. X")
        actor.register_land(8000, 3000)
        for path in (tmp_path / "data").iterdir():
            assert b"Dag number" not in path.read_bytes(), path
        for url in ("/chain/blocks/1", "/chain/tip", "/health"):
            assert b"Dag number" not in client.get(url).content


class TestConcurrentReads:
    def test_gets_during_appends(self, client):
        actor = Actor(client, "Mr. X")
        errors = []

        def reader():
            for _ in range(20):
                r1 = client.get("/chain/tip")
                r2 = client.get("/chain/verify")
                if r1.status_code != 200 or not r2.json()["ok"]:
                    errors.append((r1.status_code, r2.text))

        threads = [threading.Thread(target=reader) for _ in range(4)]
        for t in threads:
            t.start()
        for i in range(10):
            actor.register_land(100 + i, 200 + i, area="10")
        for t in threads:
            t.join()
        assert errors == []
